//! Acceptance run: one PASS/FAIL line per criterion.  Exact arithmetic
//! throughout, so the only tolerances are the wall-clock budgets.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};
use zmtforge_core::crucial::subresultant_chain;
use zmtforge_core::hensel::{
    check_hensel_polynomial, isolate_zero, mhl_pipeline, monic_failures, monicize, newton_start, newton_step,
    verify_mhl, HenselSystem,
};
use zmtforge_core::ideal::{member, Algebra, AlgebraPresentation, Ideal, Localization};
use zmtforge_core::integrality::{emmanuel, kronecker_cert, verify_cert};
use zmtforge_core::integrality::kronecker::poly_mul;
use zmtforge_core::ring::{poly, q, Ctx, Polynomial, Vars, Q};
use zmtforge_core::zmt::{verify_global, zmt_global, QuasiFiniteWitness};

const F1: &str = "-a + x + b*x*y + 2*b*x^2";
const F2: &str = "-b + y + a*x^2 + a*x*y + b*y^2";
const QUARTIC: &str = "-u^4 + (1+4*a*b+a^2+3*b^2)*u^3 \
    + b*(b^5+8*a*b^4+7*a^2*b^3-a^3*b^2-4*b*a^4+a^5-6*a^2*b-a^3+4*a*b^2)*u^2 \
    - a^2*b^2*(a-b)*(a+2*b)*(2*b^2-9*a*b+a^2)*u \
    + a^4*b^3*(a-4*b)*(a+2*b)^2*(a-b)^2";

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(id: &str, budget: Duration, f: impl FnOnce() -> Outcome + std::panic::UnwindSafe) {
    let start = Instant::now();
    let out = std::panic::catch_unwind(f).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Outcome { ok: false, detail: format!("panicked: {msg}") }
    });
    let took = start.elapsed();
    let in_time = took <= budget;
    let verdict = if out.ok && in_time { "PASS" } else { "FAIL" };
    let late = if in_time { String::new() } else { format!(", over the {:?} budget", budget) };
    println!("{verdict} {id}: {} [{:.2?}{late}]", out.detail, took);
}

fn ring4() -> (Ctx, Ideal) {
    let c = Vars::new(&["x", "y", "a", "b"]);
    let rel = Ideal::new(&c, vec![poly(F1, &c), poly(F2, &c)]);
    (c, rel)
}

fn worked_system() -> HenselSystem {
    let a = Vars::new(&["a", "b"]);
    let base = AlgebraPresentation::new(&a, vec![], Localization::PointIdeal(vec!["a".into(), "b".into()])).unwrap();
    let c = Vars::new(&["x", "y", "a", "b"]);
    HenselSystem::new(&base, &[poly("a", &a), poly("b", &a)], &["x".into(), "y".into()], &[poly(F1, &c), poly(F2, &c)])
        .unwrap()
}

fn substitute(p: &Polynomial, var: &str, val: &Polynomial) -> Polynomial {
    p.substitute(&[(var, val.clone())]).unwrap()
}

fn identity_suite(literal: bool) -> Outcome {
    let (c, rel) = ring4();
    let t = poly("1+a*x+b*y", &c);
    let w = poly("1+2*b*x+b*y", &c);
    let u = &t * &(&w * &w);
    let tc = Vars::new(&["t", "x", "y", "a", "b"]);
    let eq_t = if literal { "t^2-(1+a*x)*t-b+a*x^2" } else { "t^2-(1+a*x)*t-b^2+a*b*x^2" };
    let i = substitute(&poly(eq_t, &tc), "t", &t.embed(&tc).unwrap()).embed(&c).unwrap();
    let ii = &(&t * &poly("x", &c)) - &poly("a+(a-2*b)*x^2", &c);
    let iii = &(&t * &poly("y", &c)) - &poly("b-a*x^2", &c);
    let iv = &(&w * &poly("x", &c)) - &poly("a", &c);
    let uc = Vars::new(&["u", "x", "y", "a", "b"]);
    let v = substitute(&poly(QUARTIC, &uc), "u", &u.embed(&uc).unwrap()).embed(&c).unwrap();
    let mut failed = Vec::new();
    for (name, p) in [("(i)", i), ("(ii)", ii), ("(iii)", iii), ("(iv)", iv), ("(v)", v)] {
        if !member(&p, &rel).unwrap() {
            failed.push(name);
        }
    }
    if literal {
        Outcome {
            ok: failed.is_empty(),
            detail: if failed.is_empty() {
                "identities (i)-(v) reduce to 0 modulo <f1, f2>".into()
            } else {
                format!("not in <f1, f2>: {}; the t-equation t^2-(1+ax)t-b+ax^2 does not hold", failed.join(" "))
            },
        }
    } else {
        Outcome {
            ok: failed.is_empty(),
            detail: format!("t^2-(1+ax)t-b^2+abx^2 with (ii)-(v): {}", if failed.is_empty() { "all zero".to_string() } else { failed.join(" ") }),
        }
    }
}

fn mhl_criterion() -> Outcome {
    let sys = worked_system();
    let r = mhl_pipeline(&sys).unwrap();
    let failures = verify_mhl(&r).unwrap();
    let red = &r.reduction;
    let b = r.system.quotient().unwrap();
    // the quartic in u, sign normalized, as h for s = u = t·w^2
    let u = poly("(1+a*x+b*y)*(1+2*b*x+b*y)^2", b.ctx());
    let tq = &red.tctx;
    let qc = Vars::new(&["u", "a", "b"]);
    let neg = -&poly(QUARTIC, &qc);
    let quartic = neg.eval_map(&[Polynomial::var(tq, 0), Polynomial::var(tq, 1), Polynomial::var(tq, 2)], tq);
    let quartic_bad = check_hensel_polynomial(&r.system, &b, tq, &u, &quartic).unwrap();
    let ok = failures.is_empty() && quartic_bad.is_empty() && red.h.lc_in(0).is_one();
    Outcome {
        ok,
        detail: format!(
            "deg h = {}, r0 = {}, q = {}, N = {}, module generators = {}, verify_mhl failures {:?}, quartic in u failures {:?}",
            red.h.degree_in(0),
            red.r0,
            red.q,
            red.n_exp,
            red.module_keys.len(),
            failures,
            quartic_bad
        ),
    }
}

fn newton_criterion() -> Outcome {
    let sys = worked_system();
    let a = sys.base.ctx().clone();
    let m = sys.maximal.clone();
    let st0 = newton_start(&sys, &m).unwrap();
    let st1 = newton_step(&sys, &m, &st0).unwrap();
    let st2 = newton_step(&sys, &m, &st1).unwrap();
    let ideal = Ideal::new(&a, m.clone());
    let residual_in = |pt: &[Polynomial], k: u32| -> bool {
        let pw = ideal.power(k);
        sys.eqs.iter().all(|f| {
            let mut imgs = pt.to_vec();
            imgs.extend((0..a.len()).map(|i| Polynomial::var(&a, i)));
            member(&f.eval_map(&imgs, &a), &pw).unwrap()
        })
    };
    let first = st1.point == vec![poly("a", &a), poly("b", &a)];
    let ok = first && residual_in(&st1.point, 2) && residual_in(&st2.point, 4);
    Outcome { ok, detail: format!("step 1 gives (a, b): {first}; residuals in <a,b>^2 then <a,b>^4: {ok}") }
}

fn idempotent_criterion() -> Outcome {
    let c = Vars::new(&["x"]);
    let d = isolate_zero(&c, 1, &[poly("x-x^2", &c)], &[q(0)]).unwrap();
    let rel = Ideal::new(&c, vec![poly("x-x^2", &c)]);
    let e = d.e.clone();
    let ok = e == poly("1-x", &c)
        && member(&(&(&e * &e) - &e), &rel).unwrap()
        && member(&(&e * &poly("x", &c)), &rel).unwrap();
    Outcome { ok, detail: format!("e = {e}") }
}

fn random_poly(rng: &mut ChaCha8Rng, c: &Ctx, vars: &[&str], deg: u32) -> Polynomial {
    let mut p = Polynomial::zero(c);
    for _ in 0..rng.gen_range(1..=3) {
        let mut t = Polynomial::int(c, rng.gen_range(-3..=3));
        let d = rng.gen_range(0..=deg);
        for _ in 0..d {
            let v = vars[rng.gen_range(0..vars.len())];
            t = &t * &Polynomial::var_named(c, v).unwrap();
        }
        p = &p + &t;
    }
    p
}

fn emmanuel_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = Vars::new(&["x", "a", "b"]);
    let x = poly("x", &c);
    let cv = vec!["a".to_string(), "b".to_string()];
    let mut bad = 0;
    let mut certs = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let mut coeffs: Vec<Polynomial> = (0..=n).map(|_| random_poly(&mut rng, &c, &["a", "b"], 2)).collect();
        if coeffs[n].is_zero() {
            coeffs[n] = poly("a", &c);
        }
        let rel = zmtforge_core::ring::univ::horner(&coeffs, &x);
        let owner: Algebra = AlgebraPresentation::new(&c, vec![rel], Localization::None).unwrap();
        let e = emmanuel(&owner, &coeffs, &cv, &x).unwrap();
        for cert in e.u_certs.iter().chain(&e.ux_certs) {
            certs += 1;
            if verify_cert(cert).is_err() {
                bad += 1;
            }
        }
        let with_rel = |g: &[Polynomial]| {
            let mut v = g.to_vec();
            v.extend(owner.relations().gens().iter().cloned());
            Ideal::new(&c, v)
        };
        let iu = with_rel(&e.u);
        let ia = with_rel(&coeffs);
        if !(iu.contains_ideal(&ia).unwrap() && ia.contains_ideal(&iu).unwrap()) {
            bad += 1;
        }
    }
    Outcome { ok: bad == 0, detail: format!("200 instances, {certs} certificates, {bad} failures") }
}

fn eval_at(p: &Polynomial, pt: &[Q]) -> Q {
    p.eval_rational(pt)
}

fn kronecker_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = Vars::new(&["b0", "b1", "b2"]);
    let base = AlgebraPresentation::polynomial_ring(&c);
    let names = ["b0", "b1", "b2"];
    let mut bad = 0;
    let mut certs = 0;
    for _ in 0..100 {
        let mk = |rng: &mut ChaCha8Rng| {
            let d = rng.gen_range(1..=3);
            let mut f: Vec<Polynomial> = (0..d).map(|_| random_poly(rng, &c, &names, 1)).collect();
            f.push(Polynomial::one(&c));
            f
        };
        let f = mk(&mut rng);
        let g = mk(&mut rng);
        let h = poly_mul(&f, &g);
        let points: Vec<Vec<Q>> = (0..5).map(|_| (0..3).map(|_| q(rng.gen_range(-9..=9))).collect()).collect();
        for (fac, other) in [(&f, &g), (&g, &f)] {
            for j in 0..fac.len() - 1 {
                let cert = kronecker_cert(&base, fac, &h, j).unwrap();
                certs += 1;
                if verify_cert(&cert).is_err() {
                    bad += 1;
                }
                for pt in &points {
                    let aj = eval_at(&fac[j], pt);
                    let mut acc = Q::zero();
                    let mut pw = Q::one();
                    for ck in &cert.coeffs {
                        acc += eval_at(ck, pt) * &pw;
                        pw *= &aj;
                    }
                    // h = f·g also holds after specialization, coefficient by coefficient
                    let prod_ok = (0..h.len()).all(|k| {
                        let conv: Q = (0..=k)
                            .filter(|&i| i < fac.len() && k - i < other.len())
                            .map(|i| eval_at(&fac[i], pt) * eval_at(&other[k - i], pt))
                            .sum();
                        eval_at(&h[k], pt) == conv
                    });
                    if !acc.is_zero() || !prod_ok {
                        bad += 1;
                    }
                }
            }
        }
    }
    Outcome { ok: bad == 0, detail: format!("100 pairs, {certs} coefficient certificates, 5 points each, {bad} failures") }
}

// dense rational univariate helpers for the Euclidean oracle
fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let c = &r[k] / &b[db];
        for i in 0..=db {
            let t = &c * &b[i];
            r[k - db + i] -= t;
        }
        r = trim(r);
    }
    r
}

fn euclid_gcd_degree(a: &[Q], b: &[Q]) -> usize {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    x.len() - 1
}

fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else { return Q::zero() };
        if p != k {
            m.swap(p, k);
            d = -d;
        }
        d *= &m[k][k];
        for r in k + 1..n {
            let f = &m[r][k] / &m[k][k];
            for cc in k..n {
                let t = &f * &m[k][cc];
                m[r][cc] -= t;
            }
        }
    }
    d
}

fn sylvester(f: &[Q], g: &[Q]) -> Q {
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let n = df + dg;
    let mut m = vec![vec![Q::zero(); n]; n];
    for i in 0..dg {
        for (k, c) in f.iter().rev().enumerate() {
            m[i][i + k] = c.clone();
        }
    }
    for i in 0..df {
        for (k, c) in g.iter().rev().enumerate() {
            m[dg + i][i + k] = c.clone();
        }
    }
    det(m)
}

fn subresultant_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c = Vars::new(&["X"]);
    let mut bad = 0;
    for k in 0..100 {
        let mut pair: Vec<Vec<Q>> = (0..2)
            .map(|_| {
                let d = rng.gen_range(1..=6);
                let mut v: Vec<Q> = (0..=d).map(|_| q(rng.gen_range(-5..=5))).collect();
                if v[d].is_zero() {
                    v[d] = q(1);
                }
                v
            })
            .collect();
        // share a factor in a third of the cases
        if k % 3 == 0 {
            let common: Vec<Q> = vec![q(rng.gen_range(-3..=3)), q(1)];
            for p in pair.iter_mut() {
                let mut out = vec![Q::zero(); p.len() + 1];
                for (i, a) in p.iter().enumerate() {
                    for (j, b) in common.iter().enumerate() {
                        out[i + j] += a * b;
                    }
                }
                *p = out;
            }
        }
        pair.sort_by_key(|p| std::cmp::Reverse(p.len()));
        let (fv, gv) = (&pair[0], &pair[1]);
        let to_poly = |v: &[Q]| {
            let mut p = Polynomial::zero(&c);
            for (i, a) in v.iter().enumerate() {
                p = &p + &Polynomial::var(&c, 0).pow(i as u32).scale(a);
            }
            p
        };
        let (f, g) = (to_poly(fv), to_poly(gv));
        let ch = subresultant_chain(&f, &g, 0).unwrap();
        let gcd = euclid_gcd_degree(fv, gv);
        let (df, dg) = (fv.len() - 1, gv.len() - 1);
        let delta = dg.max(df - 1) as u32;
        let expected = sylvester(fv, gv) * fv[df].clone().pow((delta - dg as u32) as i32);
        let sr0 = ch.chain[0].constant_value().unwrap_or_else(Q::zero);
        if ch.first_nonzero() != gcd || sr0 != expected || !ch.check() {
            bad += 1;
        }
    }
    Outcome { ok: bad == 0, detail: format!("100 pairs, {bad} mismatches (Sr0 = lc(f)^(delta - deg g)·Res)") }
}

fn monic_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = Vars::new(&["a", "b"]);
    let base = AlgebraPresentation::new(&a, vec![], Localization::PointIdeal(vec!["a".into(), "b".into()])).unwrap();
    let sys = HenselSystem::new(&base, &[poly("a", &a), poly("b", &a)], &[], &[]).unwrap();
    let c = Vars::new(&["X", "a", "b"]);
    let mut bad = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let mut f = Polynomial::zero(&c);
        // a_0 ∈ M, a_1 ∈ unit + M
        let a0 = &(&poly("a", &c) * &Polynomial::int(&c, rng.gen_range(1..=3))) + &(&poly("b", &c) * &random_poly(&mut rng, &c, &["a", "b"], 1));
        let a1 = &Polynomial::int(&c, [1, -1, 2, 3][rng.gen_range(0..4)]) + &(&poly("a", &c) * &random_poly(&mut rng, &c, &["a", "b"], 1));
        f = &f + &a0;
        f = &f + &(&a1 * &poly("X", &c));
        for j in 2..=n {
            let mut aj = random_poly(&mut rng, &c, &["a", "b"], 2);
            if j == n && aj.is_zero() {
                aj = Polynomial::one(&c);
            }
            f = &f + &(&aj * &poly("X", &c).pow(j as u32));
        }
        match monicize(&sys, &c, &f) {
            Ok(r) => {
                if !r.identity_check.is_zero() || !monic_failures(&sys, &r).unwrap().is_empty() {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    Outcome { ok: bad == 0, detail: format!("50 instances, {bad} failures") }
}

fn global_smoke() -> Outcome {
    let c = Vars::new(&["x", "a"]);
    let b = AlgebraPresentation::new(&c, vec![poly("a*x-1", &c)], Localization::None).unwrap();
    let base = vec!["a".to_string()];
    let gens = vec!["x".to_string()];
    let w = QuasiFiniteWitness::search(&b, &base, &gens, &[poly("a", &c)]).unwrap();
    let r = zmt_global(&b, &base, &gens, &w).unwrap();
    let failures = verify_global(&b, &base, &gens, &r).unwrap();
    let fam: Vec<String> = r.family.iter().map(|p| p.to_string()).collect();
    let is_a = r.family.len() == 1 && b.equal(&r.family[0], &poly("a", &c)).unwrap();
    Outcome { ok: failures.is_empty() && is_a, detail: format!("family {{{}}}, verification failures {:?}", fam.join(", "), failures) }
}

fn main() {
    let s = Duration::from_secs;
    run("1", s(60), || identity_suite(true));
    run("1(i) corrected", s(60), || identity_suite(false));
    run("2", s(600), mhl_criterion);
    run("3", s(5), newton_criterion);
    run("4", s(1), idempotent_criterion);
    run("5", s(120), emmanuel_sweep);
    run("6", s(120), kronecker_suite);
    run("7", s(60), subresultant_oracle);
    run("8", s(60), monic_criterion);
    run("9", s(1), global_smoke);
}
