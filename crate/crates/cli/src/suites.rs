//! The verification suites behind each mode. Every function returns its
//! records in a fixed order so that reports are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use wickrep::dual::{biorthogonality_residual, complement_check, decay_table, pn_projection, vacuum_test, DualSystem};
use wickrep::fock::{embed_j, fock_window, gram, matrix_s, matrix_sstar, FockLevel};
use wickrep::metric::{gram_adjoint, positivity_certificate, DEFAULT_POSITIVITY_TOL};
use wickrep::multiindex::{setminus, tails_equivalent, wick_pair, QMatrix, TailSpec, Word};
use wickrep::rewrite::{inversions, normal_order, normal_order_traced, pair_word, Generator, Strategy};
use wickrep::scalar::{argmax_abs, CMatrix};
use wickrep::tailrep::{cross_gram, TailWindow};
use wickrep::window::{RepWindow, Residual};

use crate::config::{Mode, RunConfig, Tolerances};
use crate::report::{timed, CheckRecord, DecayRow, DecayTable, Witness};

/// Norm of `P_n(μ) e_β` below which a vector counts as decayed.
pub const DECAY_THRESHOLD: f64 = 1e-6;

/// Smallest singular value a vacuum-free window must keep.
pub const VACUUM_GAP: f64 = 1e-3;

pub struct Context {
    pub d: usize,
    pub q: QMatrix<f64>,
    pub tol: Tolerances,
    pub fock_depth: usize,
    pub tail: TailSpec,
    pub max_head: usize,
    pub max_offset: usize,
    pub sweep_length: usize,
    pub seed: u64,
}

impl Context {
    pub fn new(c: &RunConfig) -> Result<Self, crate::config::ConfigError> {
        Ok(Context {
            d: c.d,
            q: c.q_matrix()?,
            tol: c.tolerances,
            fock_depth: c.fock_depth,
            tail: c.tail_spec()?,
            max_head: c.tail.max_head,
            max_offset: c.tail.max_offset,
            sweep_length: c.sweep_length,
            seed: c.random_q.map_or(0, |r| r.seed),
        })
    }

    /// The first constant reference `j^∞` in a different class from the
    /// configured one.
    pub fn contrast(&self) -> TailSpec {
        (1..=self.d as u8)
            .map(TailSpec::constant)
            .find(|t| !tails_equivalent(t, &self.tail))
            .expect("d >= 2 leaves an inequivalent constant tail")
    }

    fn tail_window(&self, r: &TailSpec) -> wickrep::Result<TailWindow<f64>> {
        TailWindow::new(r, self.max_head, self.max_offset, &self.q)
    }
}

fn witness(w: &RepWindow<f64>, r: &Residual<f64>) -> Option<Witness> {
    r.witness.map(|(i, j, row, col)| Witness {
        letters: if i == j { vec![i] } else { vec![i, j] },
        row: w.labels[row].clone(),
        col: w.labels[col].clone(),
    })
}

fn guard(name: &str, f: impl FnOnce(CheckRecord) -> wickrep::Result<CheckRecord>) -> CheckRecord {
    timed(|| f(CheckRecord::new(name)).unwrap_or_else(|e| CheckRecord::new(name).failed(e)))
}

pub fn fock_suite(cx: &Context) -> Vec<CheckRecord> {
    let (d, n_max, q, tol) = (cx.d, cx.fock_depth, &cx.q, cx.tol);
    let levels: Vec<FockLevel> = (0..=n_max).map(|n| FockLevel::new(n, d)).collect();
    let label = |n: usize, i: usize| levels[n].basis[i].to_string();
    let mut out = Vec::new();

    out.push(guard("fock.gram_positivity", |r| {
        let mut worst: Option<(f64, usize, Vec<usize>)> = None;
        let mut ok = true;
        for n in 0..=n_max {
            let p = positivity_certificate(&gram(n, q), DEFAULT_POSITIVITY_TOL)?;
            ok &= p.ok;
            if worst.as_ref().is_none_or(|w| p.min_eigenvalue < w.0) {
                worst = Some((p.min_eigenvalue, n, p.worst_block));
            }
        }
        let (min, n, block) = worst.expect("at least one level");
        let w = Witness {
            letters: vec![],
            row: label(n, block[0]),
            col: label(n, *block.last().unwrap()),
        };
        Ok(r.param("depth", n_max)
            .param("worst_level", n)
            .verdict(min, ok)
            .witness(Some(w)))
    }));

    out.push(guard("fock.gram_blocks", |r| {
        let mut stray = 0usize;
        let mut first = None;
        for (n, lv) in levels.iter().enumerate() {
            let g = gram(n, q);
            for a in 0..lv.dim() {
                for b in 0..lv.dim() {
                    let z = g.inner(a, b);
                    if lv.basis[a].sorted() != lv.basis[b].sorted() && (z.re != 0.0 || z.im != 0.0) {
                        stray += 1;
                        first.get_or_insert((n, a, b));
                    }
                }
            }
        }
        let w = first.map(|(n, a, b)| Witness {
            letters: vec![],
            row: label(n, a),
            col: label(n, b),
        });
        Ok(r.param("depth", n_max).verdict(stray as f64, stray == 0).witness(w))
    }));

    // s_j: F_n -> F_{n+1} needs n + 1 <= N
    let mut adj = (0.0, None);
    let mut iso = (0.0, None);
    let mut comm = (0.0, None);
    let bump = |slot: &mut (f64, Option<Witness>), m: &CMatrix<f64>, letters: Vec<usize>, rn: usize, cn: usize| {
        if let Some((i, j, v)) = argmax_abs(m) {
            if v > slot.0 || slot.1.is_none() {
                *slot = (
                    v.max(slot.0),
                    Some(Witness {
                        letters,
                        row: label(rn, i),
                        col: label(cn, j),
                    }),
                );
            }
        }
    };
    let relations = (|| -> wickrep::Result<()> {
        let grams: Vec<_> = (0..=n_max).map(|n| gram(n, q)).collect();
        for n in 0..n_max {
            for j in 1..=d as u8 {
                let s = matrix_s(j, n, q)?;
                let ss = matrix_sstar(j, n + 1, q)?;
                let sa = gram_adjoint(&s, &grams[n], &grams[n + 1])?;
                bump(&mut adj, &(sa - &ss), vec![j as usize], n, n + 1);
                bump(&mut iso, &(&ss * &s - CMatrix::identity(s.ncols(), s.ncols())), vec![j as usize], n, n);
                if n == 0 {
                    continue;
                }
                for i in (1..=d as u8).filter(|&i| i != j) {
                    let lhs = matrix_sstar(i, n + 1, q)? * &s;
                    let rhs = matrix_s(j, n - 1, q)? * matrix_sstar(i, n, q)? * q.get(i, j);
                    bump(&mut comm, &(lhs - rhs), vec![i as usize, j as usize], n, n);
                }
            }
        }
        Ok(())
    })();
    for (name, (v, w), t) in [
        ("fock.adjointness", adj, tol.metric),
        ("fock.isometry", iso, tol.exact),
        ("fock.commutation", comm, tol.exact),
    ] {
        let r = CheckRecord::new(name).param("depth", n_max);
        out.push(match &relations {
            Ok(()) => r.below(v, t).witness(w),
            Err(e) => r.failed(e),
        });
    }

    out.push(guard("fock.embedding_isometry", |r| {
        let mut worst = 0.0f64;
        let mut at = None;
        for k in 0..n_max {
            let j = embed_j::<f64>(k, &cx.tail, d)?;
            let res = j.adjoint() * gram(k + 1, q).entries() * &j - gram(k, q).entries();
            if let Some((a, b, v)) = argmax_abs(&res) {
                if v > worst || at.is_none() {
                    worst = worst.max(v);
                    at = Some(Witness {
                        letters: vec![],
                        row: label(k, a),
                        col: label(k, b),
                    });
                }
            }
        }
        Ok(r.param("depth", n_max)
            .param("tail", cx.tail.to_string())
            .below(worst, tol.metric)
            .witness(at))
    }));
    out
}

pub fn tail_suite(cx: &Context) -> Vec<CheckRecord> {
    let tol = cx.tol;
    let params = |r: CheckRecord| {
        r.param("ref", cx.tail.to_string())
            .param("L", cx.max_head)
            .param("M", cx.max_offset)
    };
    let tw = match cx.tail_window(&cx.tail) {
        Ok(tw) => tw,
        Err(e) => return vec![params(CheckRecord::new("tail.window")).failed(e)],
    };
    let label = |i: usize| tw.basis[i].to_string();
    let mut out = Vec::new();

    out.push(guard("tail.gram_positivity", |r| {
        let p = positivity_certificate(&tw.gram, DEFAULT_POSITIVITY_TOL)?;
        let w = Witness {
            letters: vec![],
            row: label(p.worst_block[0]),
            col: label(*p.worst_block.last().unwrap()),
        };
        Ok(params(r).param("dimension", tw.len()).verdict(p.min_eigenvalue, p.ok).witness(Some(w)))
    }));

    out.push(timed(|| {
        params(CheckRecord::new("tail.gram_routes"))
            .param("phase_orthogonal_pairs", tw.phase_orthogonal_pairs)
            .below(tw.route_discrepancy, tol.exact)
    }));

    match tw.rep_window(&cx.q).and_then(|w| Ok((w.relations(&cx.q)?, w))) {
        Ok((rel, w)) => {
            for (name, res, t) in [
                ("tail.adjointness", rel.adjointness, tol.metric),
                ("tail.isometry", rel.isometry, tol.exact),
                ("tail.commutation", rel.commutation, tol.exact),
            ] {
                out.push(params(CheckRecord::new(name)).below(res.value, t).witness(witness(&w, &res)));
            }
        }
        Err(e) => {
            for name in ["tail.adjointness", "tail.isometry", "tail.commutation"] {
                out.push(params(CheckRecord::new(name)).failed(&e));
            }
        }
    }

    out.push(guard("tail.cross_class", |r| {
        let other = cx.contrast();
        let ow = cx.tail_window(&other)?;
        let g = cross_gram(&tw, &ow, &cx.q);
        let (v, w) = match argmax_abs(&g) {
            Some((a, b, v)) => (
                v,
                Some(Witness {
                    letters: vec![],
                    row: label(a),
                    col: ow.basis[b].to_string(),
                }),
            ),
            None => (0.0, None),
        };
        // structural zeros: exact comparison
        Ok(params(r).param("contrast", other.to_string()).verdict(v, v == 0.0).witness(w))
    }));
    out
}

pub fn dual_suite(cx: &Context) -> Vec<CheckRecord> {
    let tol = cx.tol;
    let mut out = Vec::new();
    let fock = fock_window(cx.fock_depth, &cx.q);
    let tail = cx.tail_window(&cx.tail).and_then(|tw| tw.rep_window(&cx.q));
    let tail_params = |r: CheckRecord| {
        r.param("ref", cx.tail.to_string())
            .param("L", cx.max_head)
            .param("M", cx.max_offset)
    };

    let bio = |w: &RepWindow<f64>, ds: &DualSystem<f64>, r: CheckRecord| -> wickrep::Result<CheckRecord> {
        let mut worst = Residual::zero();
        for l in 0..w.max_depth {
            let res = biorthogonality_residual(w, ds, l)?;
            if res.value > worst.value || worst.witness.is_none() {
                worst = res;
            }
        }
        Ok(r.below(worst.value, tol.inverted).witness(witness(w, &worst)))
    };

    let fock_ds = DualSystem::new(&fock);
    out.push(guard("dual.biorthogonality.fock", |r| {
        bio(&fock, fock_ds.as_ref().map_err(Clone::clone)?, r.param("depth", cx.fock_depth))
    }));

    let tail = tail.and_then(|w| {
        let ds = DualSystem::new(&w)?;
        Ok((w, ds))
    });
    out.push(guard("dual.biorthogonality.tail", |r| {
        let (w, ds) = tail.as_ref().map_err(Clone::clone)?;
        bio(w, ds, tail_params(r))
    }));

    out.push(guard("dual.complement", |r| {
        let (w, ds) = tail.as_ref().map_err(Clone::clone)?;
        let (mut containment, mut angle, mut rank_ok, mut proj) = (0.0f64, f64::INFINITY, true, 0.0f64);
        for l in 0..w.max_depth {
            for j in 1..=w.d {
                let c = complement_check(w, ds.get(j, l))?;
                containment = containment.max(c.containment);
                angle = angle.min(c.min_angle);
                rank_ok &= c.rank == c.expected_rank;
                proj = proj.max(c.idempotence).max(c.self_adjointness);
            }
        }
        let pass = containment <= tol.metric && proj <= tol.metric && rank_ok && angle > 0.0;
        Ok(tail_params(r)
            .param("containment", containment)
            .param("projection_residual", proj)
            .param("rank_matches", rank_ok)
            .verdict(angle, pass))
    }));

    out.push(guard("dual.pn_idempotence", |r| {
        let (w, ds) = tail.as_ref().map_err(Clone::clone)?;
        let mu = cx.tail.head(w.max_depth);
        let p = pn_projection(&mu, w, ds)?;
        // P_n is oblique for q != 0: the self-adjointness residual is reported, not required
        Ok(tail_params(r)
            .param("mu", mu.to_string())
            .param("self_adjoint_residual", p.self_adjoint_residual()?)
            .below(p.idempotence_residual(), tol.inverted))
    }));

    out.push(guard("dual.pn_decay", |r| {
        let (w, ds) = tail.as_ref().map_err(Clone::clone)?;
        let tw = cx.tail_window(&cx.tail)?;
        let other = cx.contrast();
        let betas: Vec<usize> = (0..tw.len())
            .filter(|&b| (0..w.max_depth).any(|i| tw.basis[b].letter_at(i) != other.letter_at(i)))
            .collect();
        let rows = decay_table(|i| other.letter_at(i), &betas, w.max_depth, w, ds)?;
        let monotone = rows.iter().all(|row| row.windows(2).all(|p| p[1] <= p[0] + tol.exact));
        let last = rows.iter().map(|row| *row.last().unwrap()).fold(0.0, f64::max);
        let table = DecayTable {
            mu: other.to_string(),
            n: (1..=w.max_depth).collect(),
            rows: betas
                .iter()
                .zip(rows)
                .map(|(&b, norms)| DecayRow {
                    beta: w.labels[b].clone(),
                    norms,
                })
                .collect(),
        };
        let mut r = tail_params(r)
            .param("mu", other.to_string())
            .param("monotone", monotone)
            .param("threshold", DECAY_THRESHOLD)
            .verdict(last, monotone && last < DECAY_THRESHOLD);
        r.table = Some(table);
        Ok(r)
    }));

    out.push(guard("dual.vacuum.fock", |r| {
        let v = vacuum_test(&fock)?;
        let vac = fock.position("e").expect("the Fock window holds the vacuum");
        let on_vacuum = v.kernel_dim == 1 && {
            let k = v.kernel.column(0);
            (0..k.len()).all(|i| v.interior[i] == vac || k[i].norm() < tol.metric)
        };
        Ok(r.param("depth", cx.fock_depth)
            .param("min_singular", v.min_singular)
            .verdict(v.kernel_dim as f64, on_vacuum))
    }));

    out.push(guard("dual.vacuum.tail", |r| {
        let (w, _) = tail.as_ref().map_err(Clone::clone)?;
        let v = vacuum_test(w)?;
        Ok(tail_params(r)
            .param("kernel_dim", v.kernel_dim)
            .param("gap", VACUUM_GAP)
            .verdict(v.min_singular, v.kernel_dim == 0 && v.min_singular > VACUUM_GAP))
    }));
    out
}

pub fn normal_order_suite(cx: &Context) -> Vec<CheckRecord> {
    let (d, q, tol) = (cx.d, &cx.q, cx.tol);
    let mut out = Vec::new();
    out.push(guard("normal_order.oracle_sweep", |r| {
        let words: Vec<Word> = (0..=cx.sweep_length).flat_map(|n| Word::all_of_length(n, d)).collect();
        let (mut worst, mut mismatches, mut at) = (0.0f64, 0usize, None);
        for a in &words {
            for b in &words {
                let (c, beta, alpha) = wick_pair(a, b, q);
                let m = normal_order(&pair_word(a, b), q)?;
                let dev = (m.coeff - c).norm();
                let words_differ = !m.is_zero()
                    && (m.creators != beta || m.annihilators != alpha || beta != setminus(b, a) || alpha != setminus(a, b));
                mismatches += words_differ as usize;
                if dev > worst || at.is_none() || (words_differ && mismatches == 1) {
                    worst = worst.max(dev);
                    at = Some(Witness {
                        letters: vec![],
                        row: a.to_string(),
                        col: b.to_string(),
                    });
                }
            }
        }
        Ok(r.param("max_length", cx.sweep_length)
            .param("pairs", words.len() * words.len())
            .param("mismatches", mismatches)
            .below(worst, tol.exact)
            .verdict(worst, worst <= tol.exact && mismatches == 0)
            .witness(at))
    }));

    out.push(guard("normal_order.confluence", |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(cx.seed);
        let (mut worst, mut bad_measure, mut at) = (0.0f64, 0usize, None);
        let count = 1000;
        for _ in 0..count {
            let n = rng.random_range(0..=12);
            let w: Vec<Generator> = (0..n)
                .map(|_| Generator {
                    letter: rng.random_range(1..=d as u8),
                    starred: rng.random_bool(0.5),
                })
                .collect();
            let left = normal_order_traced(&w, q, Strategy::Leftmost)?;
            let right = normal_order_traced(&w, q, Strategy::Rightmost)?;
            for t in [&left, &right] {
                if t.measures[0] != inversions(&w) || t.measures.windows(2).any(|p| p[1] >= p[0]) {
                    bad_measure += 1;
                }
            }
            let mut dev = (left.result.coeff - right.result.coeff).norm();
            if !left.result.is_zero()
                && (left.result.creators != right.result.creators || left.result.annihilators != right.result.annihilators)
            {
                dev = f64::INFINITY;
            }
            if dev > worst || at.is_none() {
                worst = worst.max(dev);
                let text: Vec<String> = w.iter().map(|g| format!("{}{}", g.letter, if g.starred { "*" } else { "" })).collect();
                at = Some(Witness {
                    letters: vec![],
                    row: text.join(" "),
                    col: String::new(),
                });
            }
        }
        Ok(r.param("words", count)
            .param("max_length", 12)
            .param("measure_violations", bad_measure)
            .verdict(worst, worst <= tol.exact && bad_measure == 0)
            .witness(at))
    }));
    out
}

/// Runs the suites selected by `mode`, in the fixed order fock, tail, dual,
/// normal-order.
pub fn run_suites(cx: &Context, mode: Mode, parallel: bool) -> Vec<CheckRecord> {
    type Suite = fn(&Context) -> Vec<CheckRecord>;
    let all: [(Mode, Suite); 4] = [
        (Mode::FockCheck, fock_suite),
        (Mode::TailCheck, tail_suite),
        (Mode::DualCheck, dual_suite),
        (Mode::NormalOrder, normal_order_suite),
    ];
    let chosen: Vec<Suite> = all
        .iter()
        .filter(|(m, _)| mode == Mode::All || *m == mode)
        .map(|&(_, f)| f)
        .collect();
    if parallel {
        chosen.par_iter().map(|f| f(cx)).collect::<Vec<_>>().concat()
    } else {
        chosen.iter().flat_map(|f| f(cx)).collect()
    }
}
