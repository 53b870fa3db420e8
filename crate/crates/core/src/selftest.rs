//! The verification suite run by `walg selftest` and the acceptance tests.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::brst::BrstContext;
use crate::gl::{centralizer_basis, centralizer_dim_of, check_good, lagrangian_data, slodowy_degrees, Grading};
use crate::hecke::{double_centralizer_check, DualityReport, DualitySetting, EtaConvention, WGenerators};
use crate::linalg::{frac, rank, rat, SparseMatrix};
use crate::partition::Partition;
use crate::pbw::{monomial_counts, regular_w, Enveloping, PbwElement, WContext, WSpace};
use crate::polytope::{adjacency_chain, adjacent, integral_points, point_of_pyramid, pyramid_of_point};
use crate::pyramid::Pyramid;

/// Largest `N` for which the Schur duality harness runs every `(lambda, d)`.
pub const SCHUR_MAX_N: usize = 6;
/// Bound on `N^d` for the Schur duality harness.
pub const SCHUR_MAX_DIM: usize = 81;
/// Cap on `d` when `N = 1`.
pub const SCHUR_MAX_D_GL1: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub detail: Value,
}

pub const NAMES: [&str; 10] = [
    "pyramid counts",
    "good grading axioms",
    "centralizer dimensions",
    "dim m is half the orbit dimension",
    "polytope and pyramids",
    "regular W generators",
    "graded dimensions of W",
    "BRST differential",
    "Schur duality",
    "property suites",
];

/// Runs criterion `id` (1 to 10).
pub fn run(id: u8) -> Option<CriterionResult> {
    let start = Instant::now();
    let (pass, detail) = match id {
        1 => pyramid_counts(),
        2 => good_gradings(6),
        3 => centralizers(8, 6),
        4 => half_orbit(6),
        5 => polytope_consistency(5),
        6 => regular_generators(),
        7 => graded_dimensions(6),
        8 => brst(4),
        9 => schur(SCHUR_MAX_N),
        10 => properties(),
        _ => return None,
    };
    Some(CriterionResult { id, name: NAMES[id as usize - 1], pass, seconds: start.elapsed().as_secs_f64(), detail })
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=10).filter_map(run).collect()
}

fn part(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).expect("valid partition")
}

fn shapes_up_to(n: usize) -> impl Iterator<Item = Partition> {
    (1..=n).flat_map(Partition::all)
}

fn pyramids_up_to(n: usize) -> Vec<Pyramid> {
    shapes_up_to(n).flat_map(|l| Pyramid::enumerate(&l)).collect()
}

fn pyramid_counts() -> (bool, Value) {
    let mut failures = Vec::new();
    let mut check = |lam: Partition, want: usize| {
        let got = Pyramid::enumerate(&lam).len();
        if got != want {
            failures.push(json!({"shape": lam.parts(), "expected": want, "found": got}));
        }
    };
    check(part(&[3, 2, 2]), 3);
    check(part(&[4, 1]), 7);
    check(part(&[3, 2]), 3);
    for n in 1..=8 {
        check(Partition::row(n), 1);
        check(Partition::column(n), 1);
    }
    (failures.is_empty(), json!({"failures": failures}))
}

fn good_gradings(max_n: usize) -> (bool, Value) {
    let pyrs = pyramids_up_to(max_n);
    let failures: Vec<Value> = pyrs
        .par_iter()
        .filter_map(|p| {
            let r = check_good(&p.grading(), &p.nilpotent());
            (!r.all_pass()).then(|| json!({"pyramid": p, "report": r}))
        })
        .collect();
    (failures.is_empty(), json!({"pyramids": pyrs.len(), "failures": failures}))
}

fn centralizers(max_dims: usize, max_basis: usize) -> (bool, Value) {
    let shapes: Vec<Partition> = shapes_up_to(max_dims).collect();
    let dim_failures: Vec<Value> = shapes
        .par_iter()
        .filter_map(|lam| {
            let by_rank = centralizer_dim_of(&lam.jordan_matrix());
            let by_columns: usize = lam.conjugate().parts().iter().map(|c| c * c).sum();
            let by_rows = lam.centralizer_dim();
            (by_rank != by_rows || by_rows != by_columns)
                .then(|| json!({"shape": lam.parts(), "rank": by_rank, "min_sum": by_rows, "columns": by_columns}))
        })
        .collect();
    let pyrs = pyramids_up_to(max_basis);
    let basis_failures: Vec<Value> = pyrs
        .par_iter()
        .filter_map(|p| {
            let e = p.nilpotent();
            let basis = centralizer_basis(p);
            let n = p.n();
            let commutes = basis.iter().all(|x| e.bracket(x).is_zero());
            let rows: Vec<Vec<_>> =
                basis.iter().map(|x| (0..n * n).map(|k| x.get(k / n, k % n)).collect()).collect();
            let independent = rows.is_empty() || rank(&SparseMatrix::from_dense(&rows)) == basis.len();
            let full = basis.len() == centralizer_dim_of(&e);
            (!(commutes && independent && full)).then(|| json!({"pyramid": p}))
        })
        .collect();
    let pass = dim_failures.is_empty() && basis_failures.is_empty();
    (pass, json!({"shapes": shapes.len(), "pyramids": pyrs.len(), "dim_failures": dim_failures, "basis_failures": basis_failures}))
}

fn half_orbit(max_n: usize) -> (bool, Value) {
    let pyrs = pyramids_up_to(max_n);
    let failures: Vec<Value> = pyrs
        .par_iter()
        .filter_map(|p| {
            let e = p.nilpotent();
            let n = p.n();
            let orbit = n * n - centralizer_dim_of(&e);
            let m = lagrangian_data(&p.grading(), &e).m.dim();
            (2 * m != orbit).then(|| json!({"pyramid": p, "dim_m": m, "dim_orbit": orbit}))
        })
        .collect();
    (failures.is_empty(), json!({"pyramids": pyrs.len(), "failures": failures}))
}

fn polytope_consistency(max_n: usize) -> (bool, Value) {
    let shapes: Vec<Partition> = shapes_up_to(max_n).collect();
    let results: Vec<(bool, usize, Value)> = shapes
        .par_iter()
        .map(|lam| {
            let pts = integral_points(lam);
            let pyrs: BTreeSet<Vec<i64>> = Pyramid::enumerate(lam).iter().map(|p| p.left().to_vec()).collect();
            let mapped: Result<BTreeSet<Vec<i64>>, _> =
                pts.iter().map(|p| pyramid_of_point(lam, p).map(|q| q.left().to_vec())).collect();
            let roundtrip = Pyramid::enumerate(lam).iter().all(|p| pts.contains(&point_of_pyramid(p)));
            let bijective = matches!(&mapped, Ok(m) if *m == pyrs) && pts.len() == pyrs.len() && roundtrip;
            let mut chains = 0;
            let mut chains_ok = true;
            for p in &pts {
                for q in &pts {
                    chains += 1;
                    let ok = adjacency_chain(lam, p, q).is_ok_and(|c| {
                        c.first() == Some(p)
                            && c.last() == Some(q)
                            && c.windows(2).all(|w| adjacent(lam, &w[0], &w[1]).unwrap_or(false))
                    });
                    chains_ok &= ok;
                }
            }
            let detail = json!({"shape": lam.parts(), "points": pts.len(), "pyramids": pyrs.len(), "bijective": bijective, "chains_ok": chains_ok});
            (bijective && chains_ok, chains, detail)
        })
        .collect();
    let pass = results.iter().all(|r| r.0);
    let chains: usize = results.iter().map(|r| r.1).sum();
    let failures: Vec<&Value> = results.iter().filter(|r| !r.0).map(|r| &r.2).collect();
    (pass, json!({"shapes": shapes.len(), "chains": chains, "failures": failures}))
}

fn regular_generators() -> (bool, Value) {
    let mut out = Vec::new();
    let mut pass = true;
    for n in 2..=3 {
        let ctx = WContext::lagrangian(&Pyramid::french(&Partition::row(n)));
        let w = regular_w(&ctx.alg, n);
        let invariant = w.iter().all(|y| ctx.is_whittaker_invariant(y));
        let commute = (0..n).all(|i| (i + 1..n).all(|j| ctx.alg.commutator(&w[i], &w[j]).is_zero()));
        pass &= invariant && commute;
        out.push(json!({"n": n, "invariant": invariant, "commute": commute}));
    }
    let ctx = WContext::lagrangian(&Pyramid::french(&Partition::row(2)));
    let alg = &ctx.alg;
    let h = alg.unit(0, 0).sub(&alg.unit(1, 1));
    let casimir = alg.unit(0, 1).add(&alg.mul(&h, &h).scale(&frac(1, 4))).sub(&h.scale(&frac(1, 2)));
    let trace = alg.unit(0, 0).add(&alg.unit(1, 1));
    let explicit = ctx.is_whittaker_invariant(&trace) && ctx.is_whittaker_invariant(&casimir);
    pass &= explicit;
    (pass, json!({"rdet": out, "explicit_gl2": explicit}))
}

/// The pyramid, rank and space of every run of the graded dimension check.
pub fn graded_runs(max_degree: i64) -> Vec<(Pyramid, usize, WContext, WSpace)> {
    let shapes = [part(&[2]), part(&[1, 1]), part(&[2, 1]), part(&[3]), part(&[1, 1, 1])];
    let jobs: Vec<(Pyramid, usize)> = shapes
        .iter()
        .flat_map(Pyramid::enumerate)
        .flat_map(|p| {
            let half = p.grading().units_of_degree(&rat(-1)).len() / 2;
            let ranks: BTreeSet<usize> = [0, half].into();
            ranks.into_iter().map(move |r| (p.clone(), r))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(p, r)| {
            let ctx = WContext::for_pyramid(&p, r).expect("rank at most half");
            let ws = ctx.w_space(max_degree);
            (p, r, ctx, ws)
        })
        .collect()
}

fn graded_dimensions(max_degree: i64) -> (bool, Value) {
    let runs = graded_runs(max_degree);
    let mut pass = true;
    let rows: Vec<Value> = runs
        .iter()
        .map(|(p, r, _, ws)| {
            let want = monomial_counts(&slodowy_degrees(p), max_degree);
            let got = ws.graded_dims();
            pass &= want == got;
            json!({"pyramid": p, "isotropic_rank": r, "dims": got.values().collect::<Vec<_>>(), "expected": want.values().collect::<Vec<_>>()})
        })
        .collect();
    (pass, json!({"runs": rows}))
}

fn brst(max_n: usize) -> (bool, Value) {
    let pyrs: Vec<Pyramid> = pyramids_up_to(max_n).into_iter().filter(|p| p.is_even()).collect();
    let rows: Vec<(bool, Value)> = pyrs
        .par_iter()
        .map(|p| {
            let b = BrstContext::for_pyramid(p).expect("even pyramid");
            let alg = &b.ctx.alg;
            let samples = [alg.one(), alg.symbol(0)];
            let r = b.check(7, &samples);
            let d2 = r.generators.iter().all(|g| g.d_squared_zero);
            (r.all_pass(), json!({"pyramid": p, "dim_m": b.dim_m(), "d_squared_zero": d2, "phi_basis_independent": r.phi_basis_independent, "all_pass": r.all_pass()}))
        })
        .collect();
    let pass = rows.iter().all(|r| r.0);
    (pass, json!({"pyramids": rows.into_iter().map(|r| r.1).collect::<Vec<_>>()}))
}

/// Every `(lambda, d)` with `N <= max_n`, `d >= 1` and `N^d <= 81`.
pub fn schur_settings(max_n: usize) -> Vec<(Partition, Vec<usize>)> {
    shapes_up_to(max_n)
        .map(|lam| {
            let n = lam.size();
            let ds: Vec<usize> = (1..)
                .take_while(|&d| n.pow(d as u32) <= SCHUR_MAX_DIM && (n > 1 || d <= SCHUR_MAX_D_GL1))
                .collect();
            (lam, ds)
        })
        .collect()
}

pub fn schur_reports(max_n: usize) -> Vec<DualityReport> {
    schur_settings(max_n)
        .into_par_iter()
        .flat_map_iter(|(lam, ds)| {
            let w = WGenerators::new(&lam);
            ds.into_iter()
                .map(|d| {
                    double_centralizer_check(&DualitySetting::new(&lam, d), &w, EtaConvention::Untwist)
                        .expect("French pyramid and invariant generators")
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

fn schur(max_n: usize) -> (bool, Value) {
    let reports = schur_reports(max_n);
    let zero = reports.iter().find(|r| r.shape == [1, 1] && r.d == 2);
    let zero_ok = zero.is_some_and(|r| r.dims.w_image == 10 && r.dims.hecke_commutant == 10);
    let pass = zero_ok && reports.iter().all(|r| r.all_pass());
    let failures: Vec<&DualityReport> = reports.iter().filter(|r| !r.all_pass()).collect();
    (
        pass,
        json!({"settings": reports.len(), "max_n": max_n, "max_dim": SCHUR_MAX_DIM, "zero_nilpotent_gl2_d2": zero.map(|r| &r.dims), "failures": failures}),
    )
}

/// Random element of `alg` with three terms of PBW degree at most `max_deg`.
pub fn random_element(alg: &Enveloping, rng: &mut ChaCha8Rng, max_deg: usize) -> PbwElement {
    let mut out = PbwElement::zero();
    for _ in 0..3 {
        let mut term = alg.scalar(&rat(rng.gen_range(-3..=3)));
        for _ in 0..rng.gen_range(0..=max_deg) {
            term = alg.mul_symbol(&term, rng.gen_range(0..alg.dim()));
        }
        out = out.add(&term);
    }
    out
}

fn associativity(triples: usize) -> bool {
    let alg = Enveloping::gl(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..triples).all(|_| {
        let (a, b, c) = (random_element(&alg, &mut rng, 3), random_element(&alg, &mut rng, 3), random_element(&alg, &mut rng, 3));
        alg.mul(&alg.mul(&a, &b), &c) == alg.mul(&a, &alg.mul(&b, &c))
    })
}

fn kazhdan_filtration(samples: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    pyramids_up_to(3).iter().all(|p| {
        let alg = Enveloping::gl(p.n());
        let g: Grading = p.grading();
        (0..samples).all(|_| {
            let a = random_element(&alg, &mut rng, 3);
            let b = random_element(&alg, &mut rng, 3);
            let (Some(da), Some(db)) = (alg.kazhdan_degree(&g, &a), alg.kazhdan_degree(&g, &b)) else {
                return true;
            };
            let product = alg.kazhdan_degree(&g, &alg.mul(&a, &b)).is_none_or(|d| d <= da + db);
            let bracket = alg.kazhdan_degree(&g, &alg.commutator(&a, &b)).is_none_or(|d| d <= da + db - 2);
            product && bracket
        })
    })
}

fn left_ideal(samples: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    pyramids_up_to(3).iter().all(|p| {
        let ctx = WContext::lagrangian(p);
        let alg = &ctx.alg;
        (0..samples).all(|_| {
            let u = random_element(alg, &mut rng, 2);
            let v = random_element(alg, &mut rng, 2);
            let absorbs = ctx.m_symbols().all(|a| {
                let shifted = alg.symbol(a).sub(&alg.scalar(ctx.chi_of_symbol(a)));
                ctx.q_reduce(&alg.mul(&u, &shifted)).is_zero()
            });
            absorbs && ctx.q_reduce(&alg.mul(&u, &v)) == ctx.q_reduce(&alg.mul(&u, &ctx.q_reduce(&v)))
        })
    })
}

fn closure(max_degree: i64) -> (bool, usize) {
    let runs = graded_runs(max_degree);
    let mut products = 0;
    let mut ok = true;
    for (_, _, ctx, ws) in &runs {
        let basis: Vec<&PbwElement> = ws.all().collect();
        products += basis.len() * basis.len();
        ok &= basis.par_iter().all(|a| {
            basis.iter().all(|b| ctx.is_invariant_under(ctx.n_symbols(), &ctx.q_reduce(&ctx.alg.mul(a, b))))
        });
    }
    (ok, products)
}

fn properties() -> (bool, Value) {
    let assoc = associativity(50);
    let kazhdan = kazhdan_filtration(20);
    let ideal = left_ideal(10);
    let (closed, products) = closure(6);
    (
        assoc && kazhdan && ideal && closed,
        json!({"associativity": assoc, "kazhdan_filtration": kazhdan, "left_ideal": ideal, "closure": closed, "products": products}),
    )
}

