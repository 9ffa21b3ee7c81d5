//! Zhu's algebra of `M(1)^+`: the products `*` and `o`, certified membership
//! in `O(V)`, and zero-mode actions on the five families of top levels.

mod membership;

pub use membership::{
    ambient_monomials, ov_membership, ov_membership_deepening, CertificateTerm, MembershipCertificate, OvSpace,
};

use num_traits::Zero;
use serde_json::json;

use crate::engine::{standard, twisted_state, Engine};
use crate::error::{Error, Result};
use crate::exact::{format_rational, gen_binomial, int, rat, Rational};
use crate::fock::{FockVector, GeneratorProfile};
use crate::hvec::h_vector;
use crate::report::{CaseResult, VerificationReport, Witness};

/// Which algebra membership generators are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ambient {
    /// All of `M(1)`.
    Free,
    /// The fixed points `M(1)^+`.
    FixedPoints,
}

/// A representative of a class `[a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZhuElement {
    pub representative: FockVector,
    pub ambient: Ambient,
}

impl ZhuElement {
    pub fn new(representative: FockVector, ambient: Ambient) -> Result<Self> {
        if ambient == Ambient::FixedPoints && representative.theta() != representative {
            return Err(Error::InvalidArgument("representative is not theta-fixed".into()));
        }
        Ok(ZhuElement { representative, ambient })
    }

    pub fn star(&self, other: &ZhuElement) -> Result<ZhuElement> {
        Ok(ZhuElement { representative: star(&self.representative, &other.representative)?, ambient: self.ambient })
    }
}

fn sum_over_components(
    engine: &Engine,
    a: &FockVector,
    b: &FockVector,
    shift: i64,
) -> Result<FockVector> {
    let mut out = FockVector::zero();
    for (w, comp) in a.components(engine.profile()) {
        if !w.is_integer() || w < Rational::zero() {
            return Err(Error::Unsupported(format!("weight {} is not a natural number", format_rational(&w))));
        }
        let wt: u32 = w.to_integer().try_into().map_err(|_| Error::InvalidArgument("weight too large".into()))?;
        for j in 0..=wt {
            let c = gen_binomial(&w, j);
            out.add_assign_scaled(&engine.product(&comp, j as i64 + shift, b)?, &c);
        }
    }
    Ok(out)
}

/// `a * b = sum_j C(wt a, j) a(j-1) b`, extended linearly in `a`.
pub fn star(a: &FockVector, b: &FockVector) -> Result<FockVector> {
    star_with(standard(), a, b)
}

pub fn star_with(engine: &Engine, a: &FockVector, b: &FockVector) -> Result<FockVector> {
    sum_over_components(engine, a, b, -1)
}

/// `a o b = sum_i C(wt a, i) a(i-2) b`, extended linearly in `a`.
pub fn circ(a: &FockVector, b: &FockVector) -> Result<FockVector> {
    sum_over_components(standard(), a, b, -2)
}

/// `o(a) u`: the sum of `a_w~(0) u` over the homogeneous components `a_w`.
pub fn o_action(a: &FockVector, u: &FockVector) -> Result<FockVector> {
    o_action_with(standard(), a, u)
}

pub fn o_action_with(engine: &Engine, a: &FockVector, u: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::zero();
    for (_, comp) in a.components(engine.profile()) {
        out.add_assign_scaled(&engine.mode(&comp, &Rational::zero(), u)?, &int(1));
    }
    Ok(out)
}

/// Left-associated product `x_1 * x_2 * ... * x_n`.
pub fn star_chain(factors: &[FockVector]) -> Result<FockVector> {
    let mut it = factors.iter();
    let first = it.next().cloned().unwrap_or_else(FockVector::vacuum);
    it.try_fold(first, |acc, f| star(&acc, f))
}

/// `x - c 1`.
pub fn shifted(x: &FockVector, c: Rational) -> FockVector {
    x.sub(&FockVector::vacuum().scale(&c))
}

/// `J = h(-1)^4 1 - 3 h(-3)h(-1) 1 + (3/2) h(-2)^2 1`, as stated.
pub fn j_vector() -> FockVector {
    FockVector::heis_combination(&[(int(1), &[1, 1, 1, 1]), (int(-3), &[3, 1]), (rat(3, 2), &[2, 2])])
}

/// `h(-1)^4 1 - 2 h(-3)h(-1) 1 + (3/2) h(-2)^2 1`, the Virasoro singular vector of weight 4.
pub fn j_vector_singular() -> FockVector {
    FockVector::heis_combination(&[(int(1), &[1, 1, 1, 1]), (int(-2), &[3, 1]), (rat(3, 2), &[2, 2])])
}

/// The five families of top levels of irreducible `M(1)^+`-modules.
#[derive(Clone, Debug, PartialEq)]
pub enum Top {
    /// `1` in `M(1)^+`.
    Vacuum,
    /// `h(-1)1` in `M(1)^-`.
    Odd,
    /// `e^lambda` in `M(1, lambda)`.
    Momentum(Rational),
    /// `1_tw` in `M(1)(theta)^+`.
    TwistedEven,
    /// `h(-1/2)1_tw` in `M(1)(theta)^-`.
    TwistedOdd,
}

impl Top {
    pub fn families(lambdas: &[Rational]) -> Vec<Top> {
        let mut out = vec![Top::Vacuum, Top::Odd];
        out.extend(lambdas.iter().cloned().map(Top::Momentum));
        out.push(Top::TwistedEven);
        out.push(Top::TwistedOdd);
        out
    }

    pub fn state(&self) -> FockVector {
        match self {
            Top::Vacuum => FockVector::vacuum(),
            Top::Odd => FockVector::heis(&[1]),
            Top::Momentum(l) => FockVector::momentum(l.clone()),
            Top::TwistedEven => FockVector::twisted_vacuum(),
            Top::TwistedOdd => twisted_state(&[1]),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Top::Vacuum => "1".into(),
            Top::Odd => "h(-1)1".into(),
            Top::Momentum(l) => format!("e^{}", format_rational(l)),
            Top::TwistedEven => "1_tw".into(),
            Top::TwistedOdd => "h(-1/2)1_tw".into(),
        }
    }

    /// The family label, with all momenta sharing one.
    pub fn family(&self) -> &'static str {
        match self {
            Top::Vacuum => "1",
            Top::Odd => "h(-1)1",
            Top::Momentum(_) => "e^lambda",
            Top::TwistedEven => "1_tw",
            Top::TwistedOdd => "h(-1/2)1_tw",
        }
    }

    /// The eigenvalue of `o(H^{2r})`, `r <= 3`, as tabulated.
    pub fn table_value(&self, r: u32) -> Option<Rational> {
        Some(match (self, r) {
            (Top::Vacuum, 1..=3) => int(0),
            (Top::Odd, 1..=3) => int(1),
            (Top::Momentum(l), 1) => l * l / int(2),
            (Top::Momentum(_), 2..=3) => int(0),
            (Top::TwistedEven, 1) => rat(1, 16),
            (Top::TwistedEven, 2) => rat(-1, 128),
            (Top::TwistedEven, 3) => rat(1, 256),
            (Top::TwistedOdd, 1) => rat(9, 16),
            (Top::TwistedOdd, 2) => rat(15, 128),
            (Top::TwistedOdd, 3) => rat(9, 256),
            _ => return None,
        })
    }
}

/// The eigenvalue of `o(a)` on `u`, if `u` is an eigenvector.
pub fn eigenvalue(a: &FockVector, u: &FockVector) -> Result<Option<Rational>> {
    let out = o_action(a, u)?;
    if out.is_zero() {
        return Ok(Some(Rational::zero()));
    }
    Ok(Engine::scalar_multiple(&out, u))
}

pub fn default_lambdas() -> Vec<Rational> {
    vec![int(1), rat(3, 2), rat(1, 2)]
}

fn lambda_param(lambdas: &[Rational]) -> serde_json::Value {
    json!(lambdas.iter().map(format_rational).collect::<Vec<_>>())
}

/// `L(0)`, `H~4(0)`, `H~6(0)` on the five top families: fifteen cases.
pub fn verify_top_actions(lambdas: &[Rational]) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("top-actions").param("lambdas", lambda_param(lambdas));
    let names = ["L", "H4", "H6"];
    for r in 1..=3u32 {
        let op = h_vector(r);
        let mut by_family: Vec<(&str, Vec<Top>)> = Vec::new();
        for top in Top::families(lambdas) {
            match by_family.iter_mut().find(|(f, _)| *f == top.family()) {
                Some(slot) => slot.1.push(top),
                None => by_family.push((top.family(), vec![top])),
            }
        }
        for (family, tops) in by_family {
            let id = format!("{}/{family}", names[(r - 1) as usize]);
            let mut case = None;
            let mut values = Vec::new();
            for top in &tops {
                let expected = top.table_value(r).expect("r <= 3");
                let got = eigenvalue(&op, &top.state())?;
                values.push(format!("{}: {}", top.label(), got.as_ref().map(format_rational).unwrap_or("not an eigenvector".into())));
                if got.as_ref() != Some(&expected) {
                    let out = o_action(&op, &top.state())?;
                    case.get_or_insert(
                        CaseResult::fail(id.clone(), format!("{} expected {}", top.label(), format_rational(&expected)))
                            .with_witness(Witness::sides(&top.state(), &out, &top.state().scale(&expected))),
                    );
                }
            }
            report.push(case.unwrap_or_else(|| CaseResult::pass(id.clone())).with_detail(values.join(", ")));
        }
    }
    let flipped = Engine::with_delta_sign(GeneratorProfile::orthonormal(), -1);
    let q2 = eigenvalue_with(&flipped, &h_vector(2), &FockVector::twisted_vacuum())?;
    report.note(format!(
        "twisted correction exp(+Delta) reproduces the table; exp(-Delta) gives H4 on 1_tw = {}",
        q2.as_ref().map(format_rational).unwrap_or("not an eigenvector".into())
    ));
    Ok(report.finalize())
}

fn eigenvalue_with(engine: &Engine, a: &FockVector, u: &FockVector) -> Result<Option<Rational>> {
    let out = o_action_with(engine, a, u)?;
    if out.is_zero() {
        return Ok(Some(Rational::zero()));
    }
    Ok(Engine::scalar_multiple(&out, u))
}

/// `u` is a top-level vector: `L(n)u = H~4(n)u = 0` for `1 <= n <= wt u - w0`.
pub fn omega_test(u: &FockVector, w0: &Rational) -> Result<bool> {
    let engine = standard();
    let Some(w) = u.homogeneous_weight(engine.profile())? else { return Ok(true) };
    let span = (w - w0).floor().to_integer();
    let span: i64 = span.try_into().map_err(|_| Error::InvalidArgument("weight gap too large".into()))?;
    let h4 = h_vector(2);
    for n in 1..=span {
        if !engine.virasoro(n, u)?.is_zero() || !engine.mode(&h4, &int(n), u)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A relation vector that should lie in `O(V)`.
pub struct NamedRelation {
    pub name: &'static str,
    pub vector: FockVector,
}

/// How the relations in `J` are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JReading {
    /// `J` and the bracket `J - omega + 4 omega*omega` as stated.
    Stated,
    /// The singular `J` with the bracket `J + omega - 4 omega*omega`.
    Corrected,
}

impl JReading {
    pub fn j(self) -> FockVector {
        match self {
            JReading::Stated => j_vector(),
            JReading::Corrected => j_vector_singular(),
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            JReading::Stated => "",
            JReading::Corrected => "[corrected]",
        }
    }
}

/// The defining relations in both generating sets, left-associated.
pub fn relation_vectors(reading: JReading) -> Result<Vec<NamedRelation>> {
    let w = standard().omega();
    let h4 = h_vector(2);
    let j = reading.j();
    let one = FockVector::vacuum();
    let ww = star(&w, &w)?;
    let cubic = |x: &FockVector| -> Result<FockVector> {
        star_chain(&[shifted(&w, int(1)), shifted(&w, rat(1, 16)), shifted(&w, rat(9, 16)), x.clone()])
    };
    let bracket = ww.scale(&int(4)).sub(&w);
    let k = match reading {
        JReading::Stated => j.add(&bracket),
        JReading::Corrected => j.sub(&bracket),
    };
    let wh3_left = h4.scale(&int(70)).sub(&ww.scale(&int(132))).add(&w.scale(&int(65))).sub(&one.scale(&int(3)));
    let rel3_right = j.scale(&int(70)).add(&ww.scale(&int(908))).sub(&w.scale(&int(515))).add(&one.scale(&int(27)));
    Ok(vec![
        NamedRelation { name: "omega-H4-commute", vector: star(&w, &h4)?.sub(&star(&h4, &w)?) },
        NamedRelation { name: "cubic-H4", vector: cubic(&h4)? },
        NamedRelation { name: "quadratic-H4", vector: star(&wh3_left, &h4)? },
        NamedRelation { name: "omega-J-commute", vector: star(&w, &j)?.sub(&star(&j, &w)?) },
        NamedRelation { name: "cubic-J", vector: cubic(&k)? },
        NamedRelation { name: "quadratic-J", vector: star(&k, &rel3_right)? },
        NamedRelation { name: "bracket-H4-J", vector: h4.scale(&int(-9)).sub(&k) },
    ])
}

fn certificate_case(id: &str, v: &FockVector, cert: &MembershipCertificate, max_cutoff: u32) -> Result<CaseResult> {
    Ok(match cert {
        MembershipCertificate::Proved { cutoff, combination } => {
            if cert.replay(v)? {
                CaseResult::pass(id).with_detail(format!("certified at W={cutoff} with {} generators", combination.len()))
            } else {
                CaseResult::fail(id, format!("certificate at W={cutoff} does not replay"))
            }
        }
        MembershipCertificate::UndeterminedAt { cutoff } => {
            CaseResult::fail(id, format!("undetermined at W={cutoff} (max {max_cutoff})"))
        }
    })
}

fn record_certificate(report: &mut VerificationReport, name: &str, cert: &MembershipCertificate) {
    report.set_param(&format!("certificate/{name}"), serde_json::to_value(cert).expect("certificate serializes"));
}

/// `o(x) u = 0` on every top of the families.
fn vanishes_on_tops(id: &str, x: &FockVector, lambdas: &[Rational]) -> Result<CaseResult> {
    for top in Top::families(lambdas) {
        let out = o_action(x, &top.state())?;
        if !out.is_zero() {
            return Ok(CaseResult::fail(id, format!("nonzero on {}", top.label()))
                .with_witness(Witness::sides(&top.state(), &out, &FockVector::zero())));
        }
    }
    Ok(CaseResult::pass(id))
}

/// The defining relations of the Zhu algebra, `J` identities and the
/// representation-theoretic properties of `*` and `o` on top levels.
pub fn verify_zhu_relations(max_cutoff: u32, lambdas: &[Rational]) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("zhu")
        .param("max_cutoff", max_cutoff)
        .param("lambdas", lambda_param(lambdas));
    let engine = standard();
    let w = engine.omega();
    let h4 = h_vector(2);
    let j = j_vector();

    for reading in [JReading::Stated, JReading::Corrected] {
        let suffix = reading.suffix();
        for rel in relation_vectors(reading)? {
            if reading == JReading::Corrected && rel.name.ends_with("-H4") {
                continue;
            }
            let name = format!("{}{suffix}", rel.name);
            let cert = ov_membership_deepening(&rel.vector, max_cutoff, Ambient::FixedPoints)?;
            report.push(certificate_case(&format!("{name}/membership"), &rel.vector, &cert, max_cutoff)?);
            record_certificate(&mut report, &name, &cert);
            report.push(vanishes_on_tops(&format!("{name}/tops"), &rel.vector, lambdas)?);
        }
    }

    let rhs = h4
        .scale(&int(-9))
        .add(&engine.virasoro(-2, &w)?.scale(&int(4)))
        .sub(&engine.virasoro(-4, &FockVector::vacuum())?.scale(&int(3)));
    for reading in [JReading::Stated, JReading::Corrected] {
        let (suffix, jj) = (reading.suffix(), &reading.j());
        report.push(CaseResult::compare(format!("J/expansion-vector{suffix}"), &FockVector::vacuum(), jj, &rhs));
        let singular = engine.virasoro(1, jj)?.is_zero() && engine.virasoro(2, jj)?.is_zero();
        report.push(CaseResult::check(format!("J/virasoro-singular{suffix}"), singular));
    }
    let wt = j.homogeneous_weight(engine.profile())?;
    report.push(CaseResult::check("J/theta-fixed-weight-4", j.theta() == j && wt == Some(int(4))));

    let factors = [("omega", w.clone()), ("H4", h4.clone()), ("J", j.clone()), ("J[corrected]", j_vector_singular())];
    for (na, a) in &factors {
        for (nb, b) in &factors {
            let ab = star(a, b)?;
            let id = format!("multiplicativity/{na}*{nb}");
            let mut case = CaseResult::pass(id.clone());
            for top in Top::families(lambdas) {
                let u = top.state();
                let lhs = o_action(&ab, &u)?;
                let rhs = o_action(a, &o_action(b, &u)?)?;
                if lhs != rhs {
                    case = CaseResult::fail(id.clone(), format!("on {}", top.label())).with_witness(Witness::sides(&u, &lhs, &rhs));
                    break;
                }
            }
            report.push(case);
        }
    }

    let small: Vec<FockVector> = (0..=4)
        .flat_map(|wt| ambient_monomials(Ambient::FixedPoints, wt))
        .map(FockVector::from_monomial)
        .collect();
    let mut circ_case = CaseResult::pass("circ-acts-as-zero-on-tops");
    'outer: for a in small.iter().filter(|a| !a.terms().next().unwrap().0.is_empty()) {
        for b in &small {
            let c = circ(a, b)?;
            let case = vanishes_on_tops("circ-acts-as-zero-on-tops", &c, lambdas)?;
            if !case.passed {
                circ_case = case.with_detail(format!("a = {a}, b = {b}"));
                break 'outer;
            }
        }
    }
    report.push(circ_case.with_detail(format!("{} x {} monomials of weight <= 4", small.len() - 1, small.len())));

    for c in lambdas {
        let u = FockVector::momentum(c.clone());
        let lw = eigenvalue(&w, &u)?;
        let lh = eigenvalue(&h4, &u)?;
        let ok = lw == Some(c * c / int(2)) && lh == Some(Rational::zero());
        report.push(CaseResult::check(format!("A(M(1))-image/c={}", format_rational(c)), ok));
    }

    let cert = ov_membership_deepening(&w, max_cutoff, Ambient::FixedPoints)?;
    report.push(CaseResult::check("omega-not-in-O(V)", !cert.is_proved()).with_detail(format!("cutoff {}", cert.cutoff())));

    let tests = [
        ("omega-test/e^1", FockVector::momentum(int(1)), int(1) / int(2), true),
        ("omega-test/h(-1)1", FockVector::heis(&[1]), int(1), true),
        ("omega-test/h(-2)1", FockVector::heis(&[2]), int(1), false),
    ];
    for (id, u, w0, expected) in tests {
        report.push(CaseResult::check(id, omega_test(&u, &w0)? == expected));
    }
    Ok(report.finalize())
}

/// An idempotent candidate with the top it should project onto.
pub struct Idempotent {
    pub name: &'static str,
    pub vector: FockVector,
    pub target: Top,
}

/// `a` as stated, `a` with the opposite overall sign, `a_+` and `a_-`.
pub fn idempotents() -> Result<Vec<Idempotent>> {
    let w = standard().omega();
    let h4 = h_vector(2);
    let body = |c1: Rational, c2: Rational| star_chain(&[shifted(&w, c1), shifted(&w, c2), h4.clone()]);
    let a_body = body(rat(1, 16), rat(9, 16))?;
    Ok(vec![
        Idempotent { name: "a", vector: a_body.scale(&rat(-256, 105)), target: Top::Odd },
        Idempotent { name: "a-sign-corrected", vector: a_body.scale(&rat(256, 105)), target: Top::Odd },
        Idempotent { name: "a+", vector: body(int(1), rat(9, 16))?.scale(&rat(-4096, 15)), target: Top::TwistedEven },
        Idempotent { name: "a-", vector: body(int(1), rat(1, 16))?.scale(&rat(-4096, 105)), target: Top::TwistedOdd },
    ])
}

/// Idempotent laws for `a`, `a_+`, `a_-`.
///
/// Membership is certified for `[omega]*[x] - e_omega [x]` and
/// `[H4]*[x] - e_H [x]`, with `e` the eigenvalues on the target top. Together
/// with the commutation of `[omega]` and `[H4]` these give `[x]*[x] = p(e)[x]`
/// for the polynomial `p` defining `x`, and `p(e)` is the value of `o(x)` on
/// the target top. When `idempotent_cutoff` is at least the top weight of
/// `x*x - x`, that difference is also certified directly.
pub fn verify_idempotents(max_cutoff: u32, idempotent_cutoff: u32, lambdas: &[Rational]) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("idempotents")
        .param("max_cutoff", max_cutoff)
        .param("idempotent_cutoff", idempotent_cutoff)
        .param("lambdas", lambda_param(lambdas));
    let w = standard().omega();
    let h4 = h_vector(2);
    for x in idempotents()? {
        let mut pattern = CaseResult::pass(format!("{}/projection", x.name));
        for top in Top::families(lambdas) {
            let u = top.state();
            let out = o_action(&x.vector, &u)?;
            let expected = if top == x.target { u.clone() } else { FockVector::zero() };
            if out != expected {
                pattern = CaseResult::fail(format!("{}/projection", x.name), format!("on {}", top.label()))
                    .with_witness(Witness::sides(&u, &out, &expected));
                break;
            }
        }
        report.push(pattern);

        let target = x.target.state();
        for (gen_name, g) in [("omega", &w), ("H4", &h4)] {
            let e = eigenvalue(g, &target)?.ok_or_else(|| Error::Internal("top is not an eigenvector".into()))?;
            let v = star(g, &x.vector)?.sub(&x.vector.scale(&e));
            let cert = ov_membership_deepening(&v, max_cutoff, Ambient::FixedPoints)?;
            let id = format!("{}/{gen_name}*x-eigen", x.name);
            report.push(certificate_case(&id, &v, &cert, max_cutoff)?);
            record_certificate(&mut report, &format!("{}/{gen_name}", x.name), &cert);
        }

        let value = eigenvalue(&x.vector, &target)?;
        report.push(
            CaseResult::check(format!("{}/idempotent-from-eigenvalues", x.name), value == Some(int(1)))
                .with_detail(format!("o(x) on {} = {}", x.target.label(), value.as_ref().map(format_rational).unwrap_or("-".into()))),
        );

        let xx = star(&x.vector, &x.vector)?.sub(&x.vector);
        let top = xx.terms().map(|(m, _)| m.degree()).max().unwrap_or_else(Rational::zero);
        if top <= int(idempotent_cutoff as i64) {
            let cert = ov_membership_deepening(&xx, idempotent_cutoff, Ambient::FixedPoints)?;
            report.push(certificate_case(&format!("{}/x*x-x", x.name), &xx, &cert, idempotent_cutoff)?);
        } else {
            report.note(format!(
                "{}: x*x - x has top weight {}, above the idempotent cutoff {idempotent_cutoff}",
                x.name,
                format_rational(&top)
            ));
        }
    }
    Ok(report.finalize())
}

/// `E * E = 4 omega` for `E = e^alpha + e^-alpha` with `(alpha, alpha) = 2`.
pub fn exponential_pair_product() -> Result<CaseResult> {
    let engine = Engine::new(GeneratorProfile::lattice(1)?);
    let e = FockVector::momentum(int(1)).add(&FockVector::momentum(int(-1)));
    let lhs = star_with(&engine, &e, &e)?;
    let rhs = engine.omega().scale(&int(4));
    Ok(CaseResult::compare("E*E=4omega", &e, &lhs, &rhs))
}

fn l0_eigenvalue(engine: &Engine, u: &FockVector) -> Result<Rational> {
    let out = engine.virasoro(0, u)?;
    if out.is_zero() {
        return Ok(Rational::zero());
    }
    Engine::scalar_multiple(&out, u).ok_or_else(|| Error::Internal(format!("{u} is not an L(0) eigenvector")))
}

fn lowest(engine: &Engine, states: &[FockVector]) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for u in states {
        let w = l0_eigenvalue(engine, u)?;
        if best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
    }
    best.ok_or_else(|| Error::Internal("empty sector".into()))
}

/// Lowest weights of the irreducible `V_L^+`-modules for `L = Z alpha`,
/// `(alpha, alpha) = 2k`, found by minimizing `L(0)` over candidate states;
/// for `k = 1` also `E * E = 4 omega`.
pub fn verify_lattice(k: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("lattice-k{k}")).param("k", k);
    let engine = Engine::new(GeneratorProfile::lattice(k)?);
    let tw = standard();
    if k == 1 {
        report.push(exponential_pair_product()?);
    }
    let exp = |c: Rational| FockVector::momentum(c);
    let pm = |c: Rational, sign: i64| exp(c.clone()).add(&exp(-c).scale(&int(sign)));
    let cands: Vec<(String, Vec<FockVector>, &Engine, Rational)> = {
        let mut v: Vec<(String, Vec<FockVector>, &Engine, Rational)> = vec![
            ("V_L^+".into(), vec![FockVector::vacuum(), pm(int(1), 1), FockVector::heis(&[1, 1])], &engine, int(0)),
            ("V_L^-".into(), vec![FockVector::heis(&[1]), pm(int(1), -1), pm(int(2), -1)], &engine, int(1)),
        ];
        for r in 1..k {
            let c = rat(r as i64, 2 * k as i64);
            let states = (-2..=2).map(|m| exp(&c + int(m))).collect();
            v.push((format!("V_(r={r})"), states, &engine, rat((r * r) as i64, 4 * k as i64)));
        }
        for (sign, label) in [(1, "+"), (-1, "-")] {
            let states = (0..=2).map(|m| pm(rat(1, 2) + int(m), sign)).collect();
            v.push((format!("V_(alpha/2)^{label}"), states, &engine, rat(k as i64, 4)));
        }
        v.push(("V_(T,+)".into(), vec![FockVector::twisted_vacuum(), twisted_state(&[1, 1, 1, 1])], tw, rat(1, 16)));
        v.push(("V_(T,-)".into(), vec![twisted_state(&[1]), twisted_state(&[3])], tw, rat(9, 16)));
        v
    };
    for (name, states, eng, expected) in cands {
        let got = lowest(eng, &states)?;
        report.push(CaseResult::compare_values(format!("lowest-weight/{name}"), &got, &expected));
    }
    Ok(report.finalize())
}

#[cfg(test)]
mod tests;
