use anyhow::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use sl2rep::admissibility::{admissibility_verdict, drift_scan, VerdictConfig};
use sl2rep::cohomology::cohomology_report_with;
use sl2rep::linalg2::{cartan_mu, random_sl2};
use sl2rep::presentation::{abelianization, enumerate_ball, Presentation};
use sl2rep::report;
use sl2rep::repvar::{
    abelian_representations, character_sample, characters_equal, conjugate_representation, dedup_by_conjugacy,
    weeks_geometric, weeks_roots, Representation,
};

use crate::{Options, Outcome};

fn dims(r: &sl2rep::cohomology::CohomologyReport) -> [usize; 4] {
    [r.dim_z1, r.dim_b1, r.dim_h1, r.dim_centralizer]
}

pub fn weeks_demo(opts: &Options) -> Result<Outcome> {
    let p = Presentation::weeks();
    let radius = opts.ball as usize;
    let tol_rank = opts.tol_rank;
    let rho_ref = weeks_geometric(0)?;
    let cfg = VerdictConfig { radius, ..VerdictConfig::default() };
    let mut summary = vec![format!("presentation: {p}")];

    let ab = abelianization(&p);
    summary.push(format!("abelianization: invariant factors {:?}, b1 = {}", ab.invariant_factors, ab.rank_free));

    let abelian = abelian_representations(&p)?;
    let mut abelian_json = Vec::new();
    let mut certified = 0;
    for (idx, rho) in abelian.iter().enumerate() {
        let v = admissibility_verdict(&p, &rho_ref, rho, &cfg)?;
        if v.kind == sl2rep::admissibility::VerdictKind::AdmissibleCertified {
            certified += 1;
        }
        abelian_json.push(json!({
            "index": idx,
            "phases": [idx / 5, idx % 5],
            "residual": report::real(rho.residual()),
            "verdict": v.kind.as_str(),
        }));
    }
    let classes = dedup_by_conjugacy(&abelian).len();
    summary.push(format!(
        "abelian representations: {} ({certified} AdmissibleCertified), {classes} up to conjugacy",
        abelian.len()
    ));

    let trivial = Representation::trivial(&p);
    let trivial_report = cohomology_report_with(&trivial, tol_rank)?;
    let d = dims(&trivial_report);
    summary.push(format!(
        "trivial representation: (dim Z1, dim B1, dim H1, dim centralizer) = ({}, {}, {}, {})",
        d[0], d[1], d[2], d[3]
    ));

    let mut geometric = Vec::new();
    for (k, x) in weeks_roots().iter().enumerate() {
        let rho = weeks_geometric(k)?;
        let v = admissibility_verdict(&p, &rho, &rho, &cfg)?;
        let r = cohomology_report_with(&rho, tol_rank)?;
        summary.push(format!(
            "root {k} ({:+.6}{:+.6}i): residual {:.3e}, {}, dims {:?}",
            x.re,
            x.im,
            rho.residual(),
            v.kind.as_str(),
            dims(&r)
        ));
        geometric.push(json!({
            "index": k,
            "root": report::complex(*x),
            "unit_modulus": (x.norm() - 1.0).abs() < 1e-9,
            "residual": report::real(rho.residual()),
            "verdict": v.kind.as_str(),
            "cohomology_dims": dims(&r),
            "representation": serde_json::to_value(rho.to_json())?,
        }));
    }

    let ball = enumerate_ball(&p, &rho_ref, radius, None)?;
    let drift = drift_scan(&p, &rho_ref, &trivial, radius)?;
    summary.push(format!("ball of radius {radius}: {} elements", ball.len()));
    summary.push(format!(
        "trivial-representation drift, min per length: {}",
        drift.min_drift.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ")
    ));

    // seeded conjugation spot check
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let g = random_sl2(&mut rng, 0.5);
    let words: Vec<_> = ball.iter().take(17).map(|e| e.word.clone()).collect();
    let mut checks = Vec::new();
    let probes = [("trivial", trivial.clone()), ("abelian_1_1", abelian[6].clone()), ("geometric_0", rho_ref.clone())];
    for (name, rho) in probes {
        let conj = conjugate_representation(&rho, &g);
        let slack = VerdictConfig { slack: 2.0 * cartan_mu(&g), ..cfg };
        let same_dims =
            dims(&cohomology_report_with(&rho, tol_rank)?) == dims(&cohomology_report_with(&conj, tol_rank)?);
        let same_verdict = admissibility_verdict(&p, &rho_ref, &rho, &cfg)?.kind
            == admissibility_verdict(&p, &rho_ref, &conj, &slack)?.kind;
        let same_characters =
            characters_equal(&character_sample(&rho, &words), &character_sample(&conj, &words), 1e-9);
        checks.push(json!({
            "representation": name,
            "dimensions_equal": same_dims,
            "verdicts_equal": same_verdict,
            "characters_equal": same_characters,
        }));
    }
    let all_ok = checks.iter().all(|c| {
        c["dimensions_equal"] == Value::Bool(true)
            && c["verdicts_equal"] == Value::Bool(true)
            && c["characters_equal"] == Value::Bool(true)
    });
    summary.push(format!("conjugation check (seed {}): {}", opts.seed, if all_ok { "ok" } else { "MISMATCH" }));

    let report = json!({
        "presentation": p.to_string(),
        "abelianization": {
            "invariant_factors": ab.invariant_factors,
            "rank_free": ab.rank_free,
        },
        "abelian_representations": abelian_json,
        "abelian_conjugacy_classes": classes,
        "trivial_cohomology": trivial_report.to_json(),
        "geometric": geometric,
        "ball": { "radius": radius, "elements": ball.len() },
        "trivial_drift": drift.to_json(),
        "conjugation_check": {
            "seed": opts.seed,
            "conjugator": report::complex_vec(&g.matrix().entries()),
            "results": checks,
        },
        "order": opts.order,
    });
    Ok(Outcome { kind: "weeks-demo", report, summary, inconclusive: false })
}
