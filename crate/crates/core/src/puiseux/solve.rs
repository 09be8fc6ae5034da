use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::bivariate::BivariatePoly;
use super::partition::PartitionCache;
use super::qm::qm_value;
use crate::elliptic::irreducibility_certificate;
use crate::error::{Error, Result};
use crate::exactnum::{
    adjoin_root, primes_between, rational_roots, AlgebraicNumber, FieldElement, IrreducibilityEvidence,
    NumberField, Polynomial, Rational,
};
use crate::qseries::PuiseuxSeries;

type An = AlgebraicNumber;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Coefficients `a_0..a_T` are produced for each branch.
    pub terms: usize,
    /// Candidate roots tried before adjoining a new one.
    pub hints: Vec<AlgebraicNumber>,
    /// Bound on nested coincident-root refinements.
    pub max_depth: usize,
    /// Primes used to certify irreducibility before adjoining a root.
    pub aux_primes: Vec<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { terms: 10, hints: Vec::new(), max_depth: 16, aux_primes: primes_between(2, 200) }
    }
}

/// Step in the construction of a branch.
#[derive(Clone, Debug, PartialEq)]
pub enum CaseEvent {
    Normalized { q: Rational },
    LeadingRoot { coeff: An, multiplicity: usize },
    Adjoined { minpoly: Polynomial<Rational>, evidence: String },
    HintUsed { value: An },
    /// Simple root; the remaining coefficients solve linear equations.
    Simple,
    /// `a_1^w` is nonzero and fixed by the first two coefficient rows.
    Case1 { w: usize, a1_power: An },
    /// `a_1 = 0`; the shifted equation is refined with its Newton polygon.
    Case2,
    Exact,
    ZeroRoot { multiplicity: usize },
}

impl fmt::Display for CaseEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseEvent::Normalized { q } => write!(f, "Q = {q}"),
            CaseEvent::LeadingRoot { coeff, multiplicity } => write!(f, "root {coeff} of multiplicity {multiplicity}"),
            CaseEvent::Adjoined { minpoly, evidence } => write!(f, "adjoined r with {} = 0 ({evidence})", minpoly.display_with("r")),
            CaseEvent::HintUsed { value } => write!(f, "root hint {value}"),
            CaseEvent::Simple => f.write_str("simple root: linear solve"),
            CaseEvent::Case1 { w, a1_power } => write!(f, "case 1: a_1^{w} = {a1_power}"),
            CaseEvent::Case2 => f.write_str("case 2: a_1 = 0"),
            CaseEvent::Exact => f.write_str("exact: later coefficients vanish"),
            CaseEvent::ZeroRoot { multiplicity } => write!(f, "x = 0 with multiplicity {multiplicity}"),
        }
    }
}

impl Serialize for CaseEvent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `y = q^Q (a_0 + a_1 q^(1/w) + ... + a_T q^(T/w)) + O(q^(Q + (T+1)/w))`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchSolution {
    pub field: Arc<NumberField>,
    pub w: u64,
    pub q: Rational,
    pub coeffs: Vec<An>,
    /// The displayed coefficients are the whole solution.
    pub exact: bool,
    pub trace: Vec<CaseEvent>,
}

impl BranchSolution {
    pub fn series(&self) -> PuiseuxSeries<An> {
        self.series_with(self.coeffs.len())
    }

    fn series_with(&self, len: usize) -> PuiseuxSeries<An> {
        let v = (&self.q * &Rational::from_i64(self.w as i64)).to_i64().expect("integral index");
        let mut c = self.coeffs.clone();
        c.resize(len.max(c.len()), An::zero(&self.field));
        let t = v + c.len() as i64;
        PuiseuxSeries::from_coeffs(self.field.clone(), self.w, v, c, t)
    }

    pub fn has_case2(&self) -> bool {
        self.trace.contains(&CaseEvent::Case2)
    }
}

impl fmt::Display for BranchSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.series().to_string();
        match (self.exact, s.rfind(" + O(")) {
            (true, Some(cut)) => f.write_str(&s[..cut]),
            _ => f.write_str(&s),
        }
    }
}

impl Serialize for BranchSolution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coords: Vec<&[Rational]> = self.coeffs.iter().map(|c| c.coords()).collect();
        let mut st = serializer.serialize_struct("BranchSolution", 7)?;
        st.serialize_field("w", &self.w)?;
        st.serialize_field("Q", &self.q)?;
        st.serialize_field("field", &*self.field)?;
        st.serialize_field("coeffs", &coords)?;
        st.serialize_field("exact", &self.exact)?;
        st.serialize_field("series", &self.to_string())?;
        st.serialize_field("caseTrace", &self.trace)?;
        st.end()
    }
}

/// A branch that could not be continued.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PendingBranch {
    /// Known leading terms as `(exponent, coefficient)`.
    pub prefix: Vec<(Rational, String)>,
    pub factor: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolveReport {
    pub branches: Vec<BranchSolution>,
    pub pending: Vec<PendingBranch>,
    pub diagnostics: Vec<String>,
}

/// `g(x, q)` as rows `h_j(x)` in integer powers of a local parameter.
#[derive(Clone, Debug)]
struct Grid {
    field: Arc<NumberField>,
    rows: Vec<Polynomial<An>>,
    /// Rows with index `>= known` are unknown; `None` when exact.
    known: Option<i64>,
}

impl Grid {
    /// Rows in powers of `q^(1/r)`, shifted to start at `q^0`.
    fn from_poly(g: &BivariatePoly) -> (Grid, u64) {
        let field = NumberField::rationals();
        let r = g.ramification();
        let scale = Rational::from_i64(r as i64);
        let idx = |e: &Rational| (e * &scale).to_i64().expect("integral index");
        let lo = g.terms().map(|(_, e, _)| idx(e)).min().unwrap_or(0);
        let n = g.degree_x().unwrap_or(0);
        let mut rows: Vec<Vec<An>> = Vec::new();
        for (i, e, c) in g.terms() {
            let j = (idx(e) - lo) as usize;
            if rows.len() <= j {
                rows.resize(j + 1, vec![An::zero(&field); n + 1]);
            }
            rows[j][i] = An::from_rational(&field, c);
        }
        let known = g.precision().map(|p| {
            let k = (p * &scale).ceil();
            i64::try_from(k).expect("precision fits") - lo
        });
        let rows = rows.into_iter().map(|c| Polynomial::new(field.clone(), c)).collect();
        (Grid { field, rows, known }, r)
    }

    fn x_degree(&self) -> usize {
        self.rows.iter().filter_map(|r| r.degree()).max().unwrap_or(0)
    }

    fn column_order(&self, i: usize) -> Option<usize> {
        self.rows.iter().position(|r| !r.coeff(i).is_zero())
    }

    fn row(&self, j: usize) -> Polynomial<An> {
        self.rows.get(j).cloned().unwrap_or_else(|| Polynomial::zero(self.field.clone()))
    }

    /// `G(v^p x, v^b) / v^beta` with `beta` the least resulting exponent.
    fn transform(&self, p: i64, b: i64) -> Grid {
        let mut terms = Vec::new();
        for (j, row) in self.rows.iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.push((i, b * j as i64 + p * i as i64, c.clone()));
                }
            }
        }
        let beta = terms.iter().map(|t| t.1).min().unwrap_or(0);
        let n = self.x_degree();
        let known = self.known.map(|k| (0..=n as i64).map(|i| b * k + p * i).min().expect("nonempty") - beta);
        let mut rows: Vec<Vec<An>> = Vec::new();
        for (i, e, c) in terms {
            let j = (e - beta) as usize;
            if known.is_some_and(|k| j as i64 >= k) {
                continue;
            }
            if rows.len() <= j {
                rows.resize(j + 1, vec![An::zero(&self.field); n + 1]);
            }
            rows[j][i] = c;
        }
        let rows = rows.into_iter().map(|c| Polynomial::new(self.field.clone(), c)).collect();
        Grid { field: self.field.clone(), rows, known }
    }

    fn taylor_shift(&self, c: &An) -> Grid {
        Grid { field: self.field.clone(), rows: self.rows.iter().map(|r| r.taylor_shift(c)).collect(), known: self.known }
    }

    /// Divide by `x^k`.
    fn drop_x(&self, k: usize) -> Grid {
        let rows = self
            .rows
            .iter()
            .map(|r| Polynomial::new(self.field.clone(), r.coeffs().iter().skip(k).cloned().collect()))
            .collect();
        Grid { field: self.field.clone(), rows, known: self.known }
    }

    fn embed(&self, field: &Arc<NumberField>) -> Result<Grid> {
        if *field == self.field {
            return Ok(self.clone());
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let c: Result<Vec<An>> = r.coeffs().iter().map(|x| x.embed(field)).collect();
                Ok(Polynomial::new(field.clone(), c?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Grid { field: field.clone(), rows, known: self.known })
    }

    fn points(&self, upto: usize) -> Vec<(i64, Rational)> {
        (0..=upto.min(self.x_degree()))
            .filter_map(|i| self.column_order(i).map(|o| (i as i64, Rational::from_i64(o as i64))))
            .collect()
    }
}

/// Lower convex hull edges of points sorted by abscissa.
fn lower_hull(points: &[(i64, Rational)]) -> Vec<((i64, Rational), (i64, Rational))> {
    let mut hull: Vec<(i64, Rational)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (o, a) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            let cross = &(&Rational::from_i64(a.0 - o.0) * &(&pt.1 - &o.1))
                - &(&(&a.1 - &o.1) * &Rational::from_i64(pt.0 - o.0));
            if cross.is_negative() || cross.is_zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt.clone());
    }
    hull.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

fn slope(edge: &((i64, Rational), (i64, Rational))) -> Rational {
    let ((i1, o1), (i2, o2)) = edge;
    &(o2 - o1) / &Rational::from_i64(i2 - i1)
}

/// `(Q, g(q^Q x, q) / q^beta)` for every edge of the Newton polygon of `g`
/// in `x`, where `beta` makes the least q-exponent zero.
pub fn normalize(g: &BivariatePoly) -> Result<Vec<(Rational, BivariatePoly)>> {
    let n = g.degree_x().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    let points: Vec<(i64, Rational)> = (0..=n).filter_map(|i| g.order(i).map(|o| (i as i64, o))).collect();
    let mut out = Vec::new();
    for edge in lower_hull(&points) {
        let q = -slope(&edge);
        let scaled = g.scale_x(&q);
        let beta = scaled.terms().map(|(_, e, _)| e.clone()).min().expect("nonzero");
        out.push((q, scaled.shift_q(&-beta)));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct BranchState {
    field: Arc<NumberField>,
    /// Local parameter `v = q^(1/r)`.
    r: i64,
    /// `y = prefix + v^s x`.
    s: i64,
    prefix: Vec<(Rational, An)>,
    q: Rational,
    trace: Vec<CaseEvent>,
    depth: usize,
}

impl BranchState {
    fn with_field(&self, field: &Arc<NumberField>) -> Result<BranchState> {
        let mut st = self.clone();
        st.prefix = self.prefix.iter().map(|(e, c)| Ok((e.clone(), c.embed(field)?))).collect::<Result<_>>()?;
        st.field = field.clone();
        Ok(st)
    }
}

struct RootChoice {
    field: Arc<NumberField>,
    root: An,
    multiplicity: usize,
    events: Vec<CaseEvent>,
}

/// Multiplicity of `r` as a root of `f` and the cofactor.
fn split_root(f: &Polynomial<An>, r: &An) -> (usize, Polynomial<An>) {
    let lin = Polynomial::linear_root(r);
    let mut rest = f.clone();
    let mut m = 0;
    while let Some(q) = rest.exact_div(&lin) {
        rest = q;
        m += 1;
    }
    (m, rest)
}

fn embed_poly(f: &Polynomial<An>, field: &Arc<NumberField>) -> Result<Polynomial<An>> {
    let c: Result<Vec<An>> = f.coeffs().iter().map(|x| x.embed(field)).collect();
    Ok(Polynomial::new(field.clone(), c?))
}

fn lowest_exponent(terms: &[(Rational, An)]) -> Option<Rational> {
    terms.iter().filter(|(_, c)| !c.is_zero()).map(|(e, _)| e.clone()).min()
}

/// Least `w` such that every exponent is a multiple of `1/w`.
fn ramification_of(terms: &[(Rational, An)]) -> u64 {
    terms.iter().filter(|(_, c)| !c.is_zero()).fold(1u64, |acc, (e, _)| {
        let d: u64 = e.denom().try_into().expect("denominator fits");
        acc.lcm(&d)
    })
}

struct Solver<'a> {
    opts: &'a SolveOptions,
    cache: PartitionCache,
    report: SolveReport,
}

impl<'a> Solver<'a> {
    /// Nonzero roots of `phi`, adjoining a root of an irreducible factor
    /// over the rationals when needed.
    fn roots(&mut self, phi: &Polynomial<An>, state: &BranchState) -> Result<Vec<RootChoice>> {
        let field = phi.ctx().clone();
        let k = phi.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
        let mut rest = Polynomial::new(field.clone(), phi.coeffs()[k..].to_vec());
        let mut out = Vec::new();
        let push = |out: &mut Vec<RootChoice>, rest: &mut Polynomial<An>, r: An, events: Vec<CaseEvent>| {
            let (m, q) = split_root(rest, &r);
            if m > 0 {
                *rest = q;
                out.push(RootChoice { field: r.field().clone(), root: r, multiplicity: m, events });
            }
        };
        let rational: Option<Vec<Rational>> = rest.coeffs().iter().map(|c| c.as_rational()).collect();
        if let Some(rq) = rational {
            let rq = Polynomial::from_rationals(rq);
            for (r, _) in rational_roots(&rq) {
                push(&mut out, &mut rest, An::from_rational(&field, &r), Vec::new());
            }
        }
        // Cofactor over a field opened by a hint; further roots are sought there.
        let mut opened: Option<Polynomial<An>> = None;
        for h in &self.opts.hints {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let target = if field.is_rationals() { h.field().clone() } else { field.clone() };
            if *h.field() != target {
                continue;
            }
            if target == field {
                if rest.eval(h).is_zero() {
                    push(&mut out, &mut rest, h.clone(), vec![CaseEvent::HintUsed { value: h.clone() }]);
                }
                continue;
            }
            let lifted = match opened.take() {
                Some(o) if *o.ctx() == target => o,
                Some(o) => {
                    opened = Some(o);
                    continue;
                }
                None => embed_poly(&rest, &target)?,
            };
            let (m, quo) = split_root(&lifted, h);
            if m > 0 {
                out.push(RootChoice {
                    field: target.clone(),
                    root: h.clone(),
                    multiplicity: m,
                    events: vec![CaseEvent::HintUsed { value: h.clone() }],
                });
                opened = Some(quo);
            } else {
                // keep the cofactor only if an earlier hint opened this field
                opened = out.iter().any(|c| c.field == target).then_some(lifted);
            }
        }
        if let Some(quo) = opened {
            // A cofactor (c x + d)^k, e.g. the conjugate of a quadratic hint.
            if let Some(d) = quo.degree().filter(|&d| d > 0) {
                let scale = An::from_rational(quo.ctx(), &Rational::from_i64(d as i64)).times(&quo.coeff(d));
                let r = quo.coeff(d - 1).negate().divide(&scale)?;
                let (m, left) = split_root(&quo, &r);
                if m > 0 {
                    out.push(RootChoice { field: quo.ctx().clone(), root: r, multiplicity: m, events: Vec::new() });
                }
                if left.degree().unwrap_or(0) > 0 {
                    self.pend(state, &left.to_string(), "roots beyond the hints are not followed");
                }
            }
            return Ok(out);
        }
        if rest.degree() == Some(1) {
            let r = rest.coeff(0).negate().divide(&rest.coeff(1))?;
            push(&mut out, &mut rest, r, Vec::new());
        }
        if rest.degree().unwrap_or(0) == 0 || out.iter().any(|c| c.field != field) {
            return Ok(out);
        }
        let rational: Option<Vec<Rational>> = rest.coeffs().iter().map(|c| c.as_rational()).collect();
        let (Some(rq), true) = (rational, field.is_rationals()) else {
            self.pend(state, &rest.to_string(), "needs a root outside the current field");
            return Ok(out);
        };
        let s = Polynomial::from_rationals(rq).squarefree_part().make_monic();
        let deg = s.degree().expect("nonconstant");
        let (evidence, label) = if deg <= 3 {
            (IrreducibilityEvidence::RationalRootExclusion, "no rational root".to_string())
        } else {
            let cert = irreducibility_certificate(&s, &self.opts.aux_primes)?;
            match cert.adjunction_evidence(&s) {
                Some(ev) => {
                    let label = match &ev {
                        IrreducibilityEvidence::ModularFullDegree(m) => format!("irreducible mod {}", m.prime()),
                        IrreducibilityEvidence::RationalRootExclusion => "no rational root".into(),
                    };
                    (ev, label)
                }
                None => {
                    self.pend(state, &s.to_string(), &format!("irreducibility not certified ({})", cert.label()));
                    return Ok(out);
                }
            }
        };
        let ext = adjoin_root(&field, &s, "r", Some(&evidence))?;
        let theta = ext.generator();
        let lifted = embed_poly(&rest, &ext)?;
        let event = CaseEvent::Adjoined { minpoly: s.clone(), evidence: label };
        let mut candidates = vec![theta.clone()];
        if deg == 2 {
            let sum = An::from_rational(&ext, &-s.coeff(1));
            candidates.push(sum.minus(&theta));
        } else {
            self.report
                .diagnostics
                .push(format!("only one of the {deg} conjugate roots of {s} is followed"));
        }
        for r in candidates {
            let (m, _) = split_root(&lifted, &r);
            out.push(RootChoice { field: ext.clone(), root: r, multiplicity: m, events: vec![event.clone()] });
        }
        Ok(out)
    }

    fn pend(&mut self, state: &BranchState, factor: &str, reason: &str) {
        self.report.pending.push(PendingBranch {
            prefix: state.prefix.iter().map(|(e, c)| (e.clone(), c.to_string())).collect(),
            factor: factor.to_string(),
            reason: reason.to_string(),
        });
    }

    fn run(&mut self, g: &BivariatePoly) -> Result<()> {
        if g.degree_x().unwrap_or(0) == 0 {
            self.report.diagnostics.push("no x-dependence: no branches".into());
            return Ok(());
        }
        let (mut grid, r0) = Grid::from_poly(g);
        let root_state = BranchState {
            field: grid.field.clone(),
            r: r0 as i64,
            s: 0,
            prefix: Vec::new(),
            q: Rational::zero(),
            trace: Vec::new(),
            depth: 0,
        };
        if grid.column_order(0).is_none() {
            if grid.known.is_some() {
                self.report.diagnostics.push("constant coefficient vanishes to the known precision".into());
                return Ok(());
            }
            let k = (0..).find(|&i| grid.column_order(i).is_some()).expect("nonzero polynomial");
            let zero = An::zero(&grid.field);
            self.report.branches.push(BranchSolution {
                field: grid.field.clone(),
                w: 1,
                q: Rational::zero(),
                coeffs: vec![zero; self.opts.terms + 1],
                exact: true,
                trace: vec![CaseEvent::ZeroRoot { multiplicity: k }],
            });
            grid = grid.drop_x(k);
        }
        let points = grid.points(grid.x_degree());
        for edge in lower_hull(&points) {
            let gamma = -slope(&edge);
            let p = gamma.numer().try_into().map_err(|_| Error::Unsupported("slope too large".into()))?;
            let b: i64 = gamma.denom().try_into().map_err(|_| Error::Unsupported("slope too large".into()))?;
            let gt = grid.transform(p, b);
            let mut state = root_state.clone();
            state.r *= b;
            state.s = p;
            state.q = Rational::from_frac(p, state.r);
            state.trace.push(CaseEvent::Normalized { q: state.q.clone() });
            self.follow(&gt, &state)?;
        }
        Ok(())
    }

    /// Continue every root of the leading row of `grid`.
    fn follow(&mut self, grid: &Grid, state: &BranchState) -> Result<()> {
        let phi = grid.row(0);
        for choice in self.roots(&phi, state)? {
            let mut st = state.with_field(&choice.field)?;
            st.trace.extend(choice.events);
            let g = grid.embed(&choice.field)?;
            self.process(&g, st, choice.root, choice.multiplicity)?;
        }
        Ok(())
    }

    fn process(&mut self, grid: &Grid, mut state: BranchState, c: An, m: usize) -> Result<()> {
        state.trace.push(CaseEvent::LeadingRoot { coeff: c.clone(), multiplicity: m });
        if m == 1 {
            state.trace.push(CaseEvent::Simple);
            return self.linear_branch(grid, state, c);
        }
        if state.depth >= self.opts.max_depth {
            state.prefix.push((Rational::from_frac(state.s, state.r), c));
            self.pend(&state, "", &format!("coincident roots persist past depth {}", self.opts.max_depth));
            return Ok(());
        }
        let mut gs = grid.taylor_shift(&c);
        state.prefix.push((Rational::from_frac(state.s, state.r), c));
        let mut m = m;
        if gs.column_order(0).is_none() {
            if gs.known.is_some() {
                self.pend(&state, "", "input precision too low to separate coincident roots");
                return Ok(());
            }
            let mut exact = state.clone();
            exact.trace.push(CaseEvent::Exact);
            let branch = self.assemble(&exact, Vec::new(), true, None);
            self.report.branches.push(branch);
            let k = (0..).find(|&i| gs.column_order(i).is_some()).expect("nonzero polynomial");
            gs = gs.drop_x(k);
            m -= k;
            if m == 0 {
                return Ok(());
            }
        }
        let ord0 = gs.column_order(0).expect("nonzero constant column");
        if ord0 == 1 {
            let a1_power = gs.row(1).coeff(0).negate().divide(&gs.row(0).coeff(m))?;
            state.trace.push(CaseEvent::Case1 { w: m, a1_power });
        } else {
            state.trace.push(CaseEvent::Case2);
        }
        let points = gs.points(m);
        for edge in lower_hull(&points) {
            let gamma = -slope(&edge);
            if !gamma.is_negative() && !gamma.is_zero() {
                let p: i64 = gamma.numer().try_into().map_err(|_| Error::Unsupported("slope too large".into()))?;
                let b: i64 = gamma.denom().try_into().map_err(|_| Error::Unsupported("slope too large".into()))?;
                let gt = gs.transform(p, b);
                let mut st = state.clone();
                st.r *= b;
                st.s = st.s * b + p;
                st.depth += 1;
                self.follow(&gt, &st)?;
            }
        }
        Ok(())
    }

    /// Solve for `x = a_0 + a_1 v + ...` from `a_M = -Q_M / h_0'(a_0)` with
    /// `a_M` itself left out of `Q_M`.
    fn linear_branch(&mut self, grid: &Grid, state: BranchState, c: An) -> Result<()> {
        let field = state.field.clone();
        let n = grid.x_degree();
        let exact = grid.known.is_none() && grid.rows.iter().all(|r| r.eval(&c).is_zero());
        let h0p = grid.row(0).derivative().eval(&c);
        let mut hvals: Vec<Vec<An>> = Vec::new();
        let mut a = vec![c.clone()];
        let limit = grid.known.map(|k| k.max(0) as usize);
        let mut truncated_at: Option<usize> = None;
        let t = self.opts.terms as i64;
        let q = lowest_exponent(&state.prefix).unwrap_or_else(|| Rational::from_frac(state.s, state.r));
        let q_idx = (&q * &Rational::from_i64(state.r)).to_i64().expect("integral index");
        let mut w = state.r as u64;
        loop {
            let want = q_idx + (t + 1) * state.r / w as i64 - state.s - 1;
            if !exact {
                while (a.len() as i64) <= want {
                    let big_m = a.len();
                    if limit.is_some_and(|l| big_m >= l) {
                        truncated_at = Some(big_m);
                        break;
                    }
                    while hvals.len() <= big_m {
                        let j = hvals.len();
                        let row = grid.row(j);
                        let mut vals = Vec::with_capacity(n + 1);
                        let mut d = row;
                        for _ in 0..=n {
                            vals.push(d.eval(&c));
                            d = d.derivative();
                        }
                        hvals.push(vals);
                    }
                    let hv = &hvals;
                    let qm = qm_value(big_m, &a, |j, k| hv[j].get(k).cloned().unwrap_or_else(|| An::zero(&field)), n, &mut self.cache);
                    a.push(qm.negate().divide(&h0p)?);
                }
            }
            let terms = self.tail_terms(&state, &a);
            let w_new = ramification_of(&terms).max(1);
            let w_new = w_new.lcm(&(q.denom().try_into().expect("denominator fits")));
            // more terms can only raise the ramification, so a rise means
            // the terms for the final w are already present
            if w_new >= w || exact || truncated_at.is_some() {
                break;
            }
            w = w_new;
        }
        let terms = self.tail_terms(&state, &a);
        let known_below = truncated_at.map(|m| Rational::from_frac(state.s + m as i64, state.r));
        let branch = self.assemble(&state, terms[state.prefix.len()..].to_vec(), exact, known_below);
        if let Some(m) = truncated_at {
            self.report.diagnostics.push(format!(
                "input precision limits the branch with leading term {}*q^({}) to {} coefficients (stopped at a_{m} of the local equation)",
                branch.coeffs.first().map(|x| x.to_string()).unwrap_or_default(),
                branch.q,
                branch.coeffs.len()
            ));
        }
        self.report.branches.push(branch);
        Ok(())
    }

    fn tail_terms(&self, state: &BranchState, a: &[An]) -> Vec<(Rational, An)> {
        let mut terms = state.prefix.clone();
        for (k, x) in a.iter().enumerate() {
            terms.push((Rational::from_frac(state.s + k as i64, state.r), x.clone()));
        }
        terms
    }

    /// Lay the terms out as `a_0..a_T` in steps of `1/w`; with `known_below`
    /// only positions under that exponent are reported.
    fn assemble(&self, state: &BranchState, tail: Vec<(Rational, An)>, exact: bool, known_below: Option<Rational>) -> BranchSolution {
        let mut terms = state.prefix.clone();
        terms.extend(tail);
        let q = lowest_exponent(&terms).unwrap_or_else(|| Rational::from_frac(state.s, state.r));
        let w = ramification_of(&terms).lcm(&(q.denom().try_into().expect("denominator fits")));
        let wr = Rational::from_i64(w as i64);
        let mut len = self.opts.terms + 1;
        if let Some(kb) = &known_below {
            let avail = (&(kb - &q) * &wr).ceil();
            let avail = usize::try_from(avail).unwrap_or(0);
            len = len.min(avail);
        }
        let mut coeffs = vec![An::zero(&state.field); len];
        for (e, c) in terms {
            let pos = (&(&e - &q) * &wr).to_i64().expect("exponent on the 1/w grid");
            if (pos as usize) < len {
                coeffs[pos as usize] = c;
            }
        }
        BranchSolution { field: state.field.clone(), w, q, coeffs, exact, trace: state.trace.clone() }
    }
}

/// All Puiseux branches `x = y(q)` of `g(x, q) = 0` with `y != 0`, plus
/// `y = 0` when `x` divides `g`.
pub fn solve_branches(g: &BivariatePoly, opts: &SolveOptions) -> Result<SolveReport> {
    let mut solver = Solver { opts, cache: PartitionCache::new(), report: SolveReport::default() };
    solver.run(g)?;
    let mut report = solver.report;
    for b in &report.branches {
        let check = verify_solution(g, b)?;
        if !check.ok {
            report.diagnostics.push(format!("branch {b} failed verification: residual {}", check.residual));
        }
    }
    Ok(report)
}

/// Residual `g(y(q), q)` of a branch and the precision it must vanish to.
#[derive(Clone, Debug)]
pub struct Verification {
    pub residual: PuiseuxSeries<An>,
    pub required: Rational,
    pub ok: bool,
}

/// Substitute the branch into `g`. With `beta = min_i (ord g_i + i Q)`, the
/// residual must vanish through `q^(beta + (T+1)/w)`, less if the
/// coefficients of `g` are themselves truncated.
pub fn verify_solution(g: &BivariatePoly, branch: &BranchSolution) -> Result<Verification> {
    let n = g.degree_x().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if branch.coeffs.iter().all(|c| c.is_zero()) {
        let required = Rational::from_i64(branch.coeffs.len() as i64);
        let g0 = g.x_view(0, &required);
        let residual = g0.map(branch.field.clone(), |c| An::from_rational(&branch.field, c));
        let ok = residual.is_zero();
        return Ok(Verification { residual, required, ok });
    }
    let len = if branch.exact { branch.coeffs.len() * 2 + 1 } else { branch.coeffs.len() };
    let y = branch.series_with(len);
    let residual = g.substitute(&y)?;
    let mut required: Option<Rational> = None;
    for i in 0..=n {
        if let Some(o) = g.order(i) {
            let v = &o + &(&branch.q * &Rational::from_i64(i as i64));
            required = Some(match required {
                Some(r) if r <= v => r,
                _ => v,
            });
        }
    }
    let mut required = required.expect("nonzero polynomial") + Rational::from_frac(branch.coeffs.len() as i64, branch.w as i64);
    if let Some(p) = g.precision() {
        let qmin = if branch.q.is_negative() { &branch.q * &Rational::from_i64(n as i64) } else { Rational::zero() };
        let cap = p + &qmin;
        if cap < required {
            required = cap;
        }
    }
    let ok = residual.is_zero() && residual.truncation() >= required;
    Ok(Verification { residual, required, ok })
}
