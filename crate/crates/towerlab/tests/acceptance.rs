//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`. The process exits nonzero when
//! any criterion fails.

use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use towerlab::finitefield::{FieldCtx, FieldElement};
use towerlab::geometry::triangle::{p2_profile, xi_profile};
use towerlab::geometry::{ramify, rh_genus, tower_genus_seq};
use towerlab::optimality::run_experiment;
use towerlab::qexpansion::{
    h2_from_xi_swapped_signs, hauptmodul_series, qidentity_registry, rational_identity_ids, verify_rational_identity,
    Status, GRID,
};
use towerlab::towercore::{
    apply_w, base_points, catalog, chain_count, chain_is_valid, chain_project, chain_reverse, neighbors,
    reduce_mod_p, tower, BaseKind, BasePoint, Chain, ModpRelation, NeighborTable, RelationKind, Substitution,
    TowerSpec,
};

const QIDENTITY_PRECISIONS: [i64; 2] = [120, 200];
const REQUIRED_QIDENTITIES: [&str; 7] =
    ["h2_from_xi", "h3_level", "h4_level", "h5_level", "weierstrass36", "h6_level", "h6p_level"];
const QIDENTITY_BUDGET: Duration = Duration::from_secs(30);
const RATIONAL_BUDGET: Duration = Duration::from_secs(5);
const EXPERIMENT_BUDGET: Duration = Duration::from_secs(60);
const ORBIT_SURROGATES: [u64; 2] = [101, 103];
const ORBIT_DEPTH: u32 = 10;
const BRUTE_FIELDS: [u64; 5] = [4, 5, 7, 9, 25];
const BRUTE_MAX_LEN: usize = 3;
const RANDOM_CHAINS: usize = 1000;
const RANDOM_MAX_LEN: usize = 6;
const RANDOM_FIELDS: [u64; 10] = [49, 25, 27, 16, 13, 11, 9, 7, 5, 4];
const RANDOM_SEED: u64 = 0x5eed_70e2;
/// Final-level ratio must reach this fraction of `sqrt(q) - 1`.
const FINAL_RATIO_FRACTION: (i64, i64) = (4, 5);

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn report(n: u32, name: &str, v: &Verdict) -> bool {
    println!("{} {n} {name}: {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
    v.ok
}

fn q_identities() -> Verdict {
    let start = Instant::now();
    let mut failed = Vec::new();
    let mut checked = 0;
    for prec in QIDENTITY_PRECISIONS {
        for id in qidentity_registry() {
            checked += 1;
            match id.verify(prec * GRID) {
                Ok(r) if r.status == Status::Pass => {}
                Ok(r) => failed.push(format!("{}@{prec} residual at {:?}", r.id, r.residual_leading_exponent)),
                Err(e) => failed.push(format!("{}@{prec}: {e}", id.id)),
            }
        }
    }
    let elapsed = start.elapsed();
    // the printed sign pattern for h2 in terms of xi does not vanish
    let swapped = h2_from_xi_swapped_signs(120 * GRID).map(|s| s.valuation().map(|e| e / GRID));
    let ids: Vec<&str> = qidentity_registry().iter().map(|q| q.id).collect();
    let missing: Vec<&str> = REQUIRED_QIDENTITIES.iter().copied().filter(|r| !ids.contains(r)).collect();
    let ok = failed.is_empty() && missing.is_empty() && elapsed < QIDENTITY_BUDGET;
    verdict(
        ok,
        format!(
            "{checked} checks, missing {missing:?}, {} failed {failed:?}, {:.2?} (limit {QIDENTITY_BUDGET:?}); swapped-sign h2 residual starts at q^{:?}",
            failed.len(),
            elapsed,
            swapped.ok().flatten()
        ),
    )
}

/// Displayed expansion: the scale that clears the printed prefactor and the
/// printed `(exponent, coefficient)` pairs.
struct Golden {
    name: &'static str,
    scale: i64,
    shown: &'static [(i64, i64)],
}

const GOLDEN: &[Golden] = &[
    Golden { name: "h2", scale: 1, shown: &[(-1, 1), (0, -24), (1, 276), (2, -2048), (3, 11202)] },
    Golden { name: "xi4", scale: 8, shown: &[(-1, 1), (1, 20), (3, -62), (5, 216), (7, -641)] },
    Golden { name: "xi9", scale: 3, shown: &[(-1, 1), (1, 5), (5, -7), (8, 3), (11, 15), (14, -32)] },
    Golden { name: "h3", scale: 1, shown: &[(-1, 1), (0, -12), (1, 54), (2, -76), (3, -243), (4, 1188)] },
    Golden {
        name: "xi25",
        scale: 1,
        shown: &[(-1, 1), (1, -1), (4, 1), (6, 1), (11, -1), (14, -1), (21, 1), (24, 1), (26, -1)],
    },
    Golden { name: "h5", scale: 1, shown: &[(-1, 1), (0, -6), (1, 9), (2, 10), (3, -30), (4, 6), (5, -25)] },
    Golden { name: "xi16", scale: 2, shown: &[(-1, 1), (3, 2), (7, -1), (11, -2), (15, 3), (19, 2)] },
    Golden { name: "h4", scale: 1, shown: &[(-1, 1), (0, -8), (1, 20), (3, -62), (5, 216), (7, -641)] },
    Golden { name: "xi36", scale: 1, shown: &[(-2, 1), (2, 1), (8, 1), (14, -1), (20, -1), (26, 1), (32, 2)] },
    Golden { name: "gamma36", scale: 1, shown: &[(-3, 1), (3, 2), (9, 1), (15, -2), (21, -2), (27, 2), (33, 4)] },
    Golden {
        name: "h6",
        scale: 1,
        shown: &[(-1, 1), (0, -5), (1, 6), (2, 4), (3, -3), (4, -12), (5, -8), (6, 12)],
    },
    Golden { name: "h6p", scale: 1, shown: &[(-1, 1), (0, 3), (1, 6), (2, 4), (3, -3), (4, -12), (5, -8)] },
    Golden { name: "xi12", scale: 1, shown: &[(-1, 1), (1, 2), (3, 1), (5, -2), (7, -2), (9, 2), (11, 4)] },
];

/// Printed exponents that disagree with the eta products, as
/// `(name, printed, actual)`. Every coefficient value still matches.
const EXPONENT_TYPOS: &[(&str, i64, i64)] = &[
    ("xi9", 1, 2),
    ("xi36", 2, 4),
    ("xi36", 8, 10),
    ("xi36", 14, 16),
    ("xi36", 20, 22),
    ("xi36", 26, 34),
    ("xi36", 32, 40),
    ("gamma36", 15, 21),
    ("gamma36", 21, 27),
    ("gamma36", 27, 33),
    ("gamma36", 33, 39),
    ("xi12", 5, 7),
    ("xi12", 7, 9),
    ("xi12", 9, 11),
    ("xi12", 11, 13),
];

fn golden_coefficients() -> Verdict {
    let mut problems = Vec::new();
    let mut matched = 0;
    let mut typos = 0;
    for g in GOLDEN {
        let s = match hauptmodul_series(g.name, 60 * GRID) {
            Ok(s) => s,
            Err(e) => {
                problems.push(format!("{}: {e}", g.name));
                continue;
            }
        };
        let scale = BigRational::from_integer(g.scale.into());
        let actual: Vec<(i64, BigRational)> =
            s.terms().take(g.shown.len()).map(|(e, c)| (e / GRID, c * &scale)).collect();
        if actual.len() < g.shown.len() {
            problems.push(format!("{}: only {} terms", g.name, actual.len()));
            continue;
        }
        for (&(pe, pc), (ae, ac)) in g.shown.iter().zip(&actual) {
            if *ac != BigRational::from_integer(pc.into()) {
                problems.push(format!("{} q^{pe}: shown {pc}, computed {ac} at q^{ae}", g.name));
            } else if pe == *ae {
                matched += 1;
            } else if EXPONENT_TYPOS.contains(&(g.name, pe, *ae)) {
                matched += 1;
                typos += 1;
            } else {
                problems.push(format!("{} coefficient {pc}: shown at q^{pe}, computed at q^{ae}", g.name));
            }
        }
    }
    let ok = problems.is_empty() && typos == EXPONENT_TYPOS.len();
    verdict(
        ok,
        format!(
            "{} series, {matched} coefficient values equal ({typos} under known exponent misprints) {problems:?}",
            GOLDEN.len()
        ),
    )
}

fn rational_identities() -> Verdict {
    let start = Instant::now();
    let ids = rational_identity_ids();
    let failed: Vec<String> = ids
        .iter()
        .filter(|id| !verify_rational_identity(id).map(|r| r.passed()).unwrap_or(false))
        .cloned()
        .collect();
    let elapsed = start.elapsed();
    let count = |prefix: &str| ids.iter().filter(|i| i.starts_with(prefix)).count();
    let required = ids.contains(&"dihedral5".to_string())
        && count("phi_consistency_") == 8
        && count("invol_sq_") >= 8
        && ids.contains(&"equiv_form_3x2".to_string())
        && ids.contains(&"w3_commute".to_string());
    verdict(
        failed.is_empty() && required && elapsed < RATIONAL_BUDGET,
        format!(
            "{} identities ({} phi_consistency, {} involution-squared), failed {failed:?}, {:.2?} (limit {RATIONAL_BUDGET:?})",
            ids.len(),
            count("phi_consistency_"),
            count("invol_sq_"),
            elapsed
        ),
    )
}

fn reductions() -> Verdict {
    // y_{j+1}^2 = y_j - y_j^2 and y_{j+1}^3 = y_j^3 + y_j^2 + y_j, terms c u^i v^j
    let cases: [(&str, u64, &[(u32, u32, i64)]); 2] =
        [("x0_2", 3, &[(0, 2, 1), (1, 0, -1), (2, 0, 1)]), ("x0_3", 2, &[(0, 3, 1), (3, 0, 1), (2, 0, 1), (1, 0, 1)])];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, p, table) in cases {
        let expected = ModpRelation::from_table(p, table);
        match reduce_mod_p(&tower(name).unwrap(), p, Substitution::OneMinusInverse) {
            Ok(r) if r == expected => parts.push(format!("{name} mod {p} ok")),
            Ok(r) => {
                ok = false;
                parts.push(format!("{name} mod {p}: got `{r}`, expected `{expected}`"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name} mod {p}: {e}"));
            }
        }
    }
    verdict(ok, parts.join("; "))
}

fn stabilization() -> Verdict {
    let expected = [("shimura_p2", Some(5)), ("shimura_p3", Some(4)), ("x0_2", None)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, want) in expected {
        match ramify(&tower(name).unwrap(), ORBIT_DEPTH, &ORBIT_SURROGATES) {
            Ok(reports) => {
                let got: Vec<Option<u32>> = reports.iter().map(|r| r.stabilization_level).collect();
                ok &= got.len() == ORBIT_SURROGATES.len() && got.iter().all(|g| *g == want);
                parts.push(format!("{name} {got:?}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    verdict(ok, format!("depth {ORBIT_DEPTH}, surrogates {ORBIT_SURROGATES:?}: {}", parts.join(", ")))
}

/// `g(X0(8)), ..., g(X0(128))` from a separate run of the classical genus
/// formula.
const X0_2_GENUS_LEVELS_3_TO_7: [u64; 5] = [0, 0, 1, 3, 9];

fn genus_anchors() -> Verdict {
    let at = |name: &str, level: u32| tower_genus_seq(&tower(name).unwrap(), level).map(|r| r[level as usize - 1].genus);
    let x16 = at("x0_4", 2);
    let x36 = at("x0_6", 2);
    let tri1 = p2_profile().and_then(|p| rh_genus(3, 0, &p));
    let tri2 = xi_profile().and_then(|p| rh_genus(6, 0, &p));
    let x2: Result<Vec<u64>, _> =
        tower_genus_seq(&tower("x0_2").unwrap(), 7).map(|r| r[2..].iter().map(|g| g.genus).collect());
    let ok = x16 == Ok(0)
        && x36 == Ok(1)
        && tri1 == Ok(0)
        && tri2 == Ok(0)
        && x2.as_deref() == Ok(&X0_2_GENUS_LEVELS_3_TO_7[..]);
    verdict(
        ok,
        format!(
            "g(X0(16))={x16:?} g(X0(36))={x36:?} triangle level 1={tri1:?} level 2={tri2:?} x0_2 levels 3-7={x2:?}"
        ),
    )
}

/// Projective coordinates `(a0 : a1)`.
fn proj(ctx: &FieldCtx, p: BasePoint) -> (FieldElement, FieldElement) {
    match p {
        BasePoint::Affine(a) => (a, ctx.one()),
        _ => (ctx.one(), ctx.zero()),
    }
}

/// `A(x(P))` as a projective pair, evaluated term by term.
fn value_of(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint) -> (FieldElement, FieldElement) {
    let x = match p {
        BasePoint::Affine(x) | BasePoint::Curve(x, _) => x,
        BasePoint::Infinity | BasePoint::Origin => return (ctx.one(), ctx.zero()),
    };
    let mut acc = ctx.zero();
    for (i, &c) in spec.value_map.iter().enumerate() {
        acc = ctx.add(acc, ctx.mul(ctx.from_int(c), ctx.pow(x, i as u64)));
    }
    (acc, ctx.one())
}

/// Whether `(P, Q)` lies on the correspondence, decided pointwise without
/// solving for fibers.
fn related(spec: &TowerSpec, ctx: &FieldCtx, p: BasePoint, q: BasePoint) -> bool {
    match spec.base {
        BaseKind::ProjectiveLine => {
            let l = spec.l as u64;
            let ((x0, x1), (y0, y1)) = (proj(ctx, p), proj(ctx, q));
            let mut sum = ctx.zero();
            for &(i, j, c) in spec.phi_table() {
                let (i, j) = (i as u64, j as u64);
                let t = [ctx.pow(x0, i), ctx.pow(x1, l - i), ctx.pow(y0, j), ctx.pow(y1, l - j)]
                    .into_iter()
                    .fold(ctx.from_int(c), |a, b| ctx.mul(a, b));
                sum = ctx.add(sum, t);
            }
            sum == ctx.zero()
        }
        BaseKind::Elliptic => {
            let (a0, a1) = value_of(spec, ctx, p);
            let (b0, b1) = value_of(spec, ctx, apply_w(spec, ctx, q));
            match spec.relation {
                RelationKind::Product(c) => ctx.mul(a0, b0) == ctx.mul(ctx.from_int(c), ctx.mul(a1, b1)),
                RelationKind::Sum(c) => {
                    ctx.add(ctx.mul(a0, b1), ctx.mul(b0, a1)) == ctx.mul(ctx.from_int(c), ctx.mul(a1, b1))
                }
            }
        }
    }
}

fn brute_counts(spec: &TowerSpec, ctx: &FieldCtx, pts: &[BasePoint]) -> Vec<u128> {
    let n = pts.len();
    let adj: Vec<Vec<bool>> =
        pts.iter().map(|&p| pts.iter().map(|&q| related(spec, ctx, p, q)).collect()).collect();
    let mut counts = vec![n as u128, 0, 0];
    for a in 0..n {
        for b in 0..n {
            if !adj[a][b] {
                continue;
            }
            counts[1] += 1;
            for c in 0..n {
                if adj[b][c] {
                    counts[2] += 1;
                }
            }
        }
    }
    counts
}

fn admissible_fields(spec: &TowerSpec, orders: &[u64]) -> Vec<FieldCtx> {
    orders
        .iter()
        .filter_map(|&q| FieldCtx::of_order(q).ok())
        .filter(|ctx| spec.check_field(ctx).is_ok())
        .collect()
}

fn counting_oracle() -> Verdict {
    let mut pairs = 0;
    let mut problems = Vec::new();
    for spec in catalog() {
        for ctx in admissible_fields(&spec, &BRUTE_FIELDS) {
            pairs += 1;
            let q = ctx.order();
            let pts = base_points(&spec, &ctx);
            let brute = brute_counts(&spec, &ctx, &pts);
            for m in 1..=BRUTE_MAX_LEN {
                match chain_count(&spec, &ctx, m, true) {
                    Ok(c) if c == brute[m - 1] => {}
                    Ok(c) => problems.push(format!("{} q={q} m={m}: dp {c}, brute {}", spec.name, brute[m - 1])),
                    Err(e) => problems.push(format!("{} q={q} m={m}: {e}", spec.name)),
                }
            }
            for &p in &pts {
                match neighbors(&spec, &ctx, p) {
                    Ok(f) if f.total() == spec.l => {}
                    Ok(f) => problems.push(format!("{} q={q} {}: fiber total {}", spec.name, p.label(), f.total())),
                    Err(e) => problems.push(format!("{} q={q} {}: {e}", spec.name, p.label())),
                }
            }
        }
    }
    verdict(
        problems.is_empty() && pairs > 0,
        format!("{pairs} admissible (tower, q) pairs, m <= {BRUTE_MAX_LEN}, q in {BRUTE_FIELDS:?}; {problems:?}"),
    )
}

fn random_chain(table: &NeighborTable, spec: &TowerSpec, rng: &mut StdRng) -> Chain {
    let len = rng.gen_range(1..=RANDOM_MAX_LEN);
    let mut i = rng.gen_range(0..table.points.len());
    let mut idx = vec![i];
    while idx.len() < len {
        let succ: Vec<usize> = table.successors(i).map(|(j, _)| j).collect();
        if succ.is_empty() {
            break;
        }
        i = succ[rng.gen_range(0..succ.len())];
        idx.push(i);
    }
    Chain::new(spec, idx.into_iter().map(|i| table.points[i]).collect())
}

fn structural_properties() -> Verdict {
    let mut rng = StdRng::seed_from_u64(RANDOM_SEED);
    let mut problems = Vec::new();
    let mut used = Vec::new();
    for spec in catalog() {
        let Some(ctx) = admissible_fields(&spec, &RANDOM_FIELDS).into_iter().next() else {
            problems.push(format!("{}: no admissible field", spec.name));
            continue;
        };
        used.push(format!("{}@{}", spec.name, ctx.order()));
        let table = NeighborTable::build(&spec, &ctx).expect("neighbor table");
        for _ in 0..RANDOM_CHAINS {
            let c = random_chain(&table, &spec, &mut rng);
            let valid = |c: &Chain| chain_is_valid(&spec, &ctx, c).unwrap_or(false);
            if !valid(&c) {
                problems.push(format!("{}: generated chain invalid", spec.name));
                break;
            }
            let Ok(r) = chain_reverse(&spec, &ctx, &c) else {
                problems.push(format!("{}: reversal rejected", spec.name));
                break;
            };
            if !valid(&r) || chain_reverse(&spec, &ctx, &r).ok().as_ref() != Some(&c) {
                problems.push(format!("{}: reversal not an involution on valid chains", spec.name));
                break;
            }
            for m in 2..=c.len() + 1 {
                for j in 0..=c.len() + 1 - m {
                    if !chain_project(&c, j, m).map(|s| valid(&s)).unwrap_or(false) {
                        problems.push(format!("{}: subchain j={j} m={m} invalid", spec.name));
                    }
                }
            }
        }
    }
    verdict(
        problems.is_empty(),
        format!("{RANDOM_CHAINS} chains each over {}; {problems:?}", used.join(" ")),
    )
}

/// `(tower, p, k, nmax, |S|, model counts)` with counts from the brute-force
/// and pruning oracles.
type Pinned = (&'static str, u64, u32, u32, usize, &'static [u128]);

const EXPERIMENTS: [Pinned; 4] = [
    ("x0_2", 5, 2, 10, 2, &[26, 25, 21, 26, 39, 72, 137, 266, 523, 1036]),
    ("x0_3", 2, 2, 8, 0, &[5, 7, 9, 11, 13, 15, 17, 19]),
    ("shimura_p2", 5, 2, 10, 0, &[26, 32, 35, 32, 30, 24, 24, 16, 16, 16]),
    ("shimura_p3", 3, 2, 8, 0, &[]),
];

/// Greatest set in which every point has `l` distinct neighbors, by naive
/// pruning over the pointwise relation.
fn pruned_set(spec: &TowerSpec, ctx: &FieldCtx) -> BTreeSet<BasePoint> {
    let mut s: BTreeSet<BasePoint> = base_points(spec, ctx).into_iter().collect();
    loop {
        let keep: BTreeSet<BasePoint> = s
            .iter()
            .copied()
            .filter(|&p| s.iter().filter(|&&q| related(spec, ctx, p, q)).count() == spec.l as usize)
            .collect();
        if keep.len() == s.len() {
            return s;
        }
        s = keep;
    }
}

fn optimality_tables() -> Verdict {
    let c = BigRational::new(FINAL_RATIO_FRACTION.0.into(), FINAL_RATIO_FRACTION.1.into());
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, p, k, nmax, want_s, want_counts) in EXPERIMENTS {
        let spec = tower(name).unwrap();
        let ctx = FieldCtx::new(p, k).unwrap();
        let q = ctx.order();
        let start = Instant::now();
        let e = match run_experiment(&spec, &ctx, nmax) {
            Ok(e) => e,
            Err(err) => {
                ok = false;
                parts.push(format!("({name}, {q}) {err}"));
                continue;
            }
        };
        let elapsed = start.elapsed();
        let counts: Vec<u128> = e.rows.iter().map(|r| r.model_count).collect();
        let oracle_s = pruned_set(&spec, &ctx).len();
        let pinned = e.complete_set.len() == want_s && oracle_s == want_s && counts == want_counts;
        let checks = [
            ("pinned", pinned),
            ("S nonempty", !e.complete_set.is_empty()),
            ("s<=count", e.rows.iter().all(|r| r.s_chain_bound <= r.model_count)),
            ("ratio<=dv", e.ratios_within_bound()),
            ("monotone", e.ratio_monotone()),
            ("final>=0.8dv", e.final_ratio_at_least(&c)),
            ("time", elapsed < EXPERIMENT_BUDGET),
        ];
        let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
        ok &= failed.is_empty();
        let last = e.rows.last().map(|r| r.ratio_text()).unwrap_or_default();
        parts.push(format!("({name}, {q}) |S|={} final ratio {last} failed {failed:?}", e.complete_set.len()));
    }
    verdict(ok, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("q-identity suite", q_identities),
        ("golden coefficients", golden_coefficients),
        ("rational identity suite", rational_identities),
        ("characteristic reductions", reductions),
        ("ramification stabilization", stabilization),
        ("genus anchors", genus_anchors),
        ("counting oracle equivalence", counting_oracle),
        ("structural properties", structural_properties),
        ("optimality tables", optimality_tables),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !report(i as u32 + 1, name, &check()) {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
