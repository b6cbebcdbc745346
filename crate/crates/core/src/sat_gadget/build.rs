//! Gadget construction, its audit and the larger-k extensions.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::Bound::Excluded;

use num_integer::Integer;
use num_traits::Signed;

use super::partition::build_partition_from_assignment;
use super::Formula;
use crate::error::{Error, Result};
use crate::geom_core::{frac, int, Point, PointSet, Rational};
use crate::oracle::brute_force_sat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Clause,
    Extra,
    Blocking,
    Variable,
    VariableBlocker,
    Padding,
    Auxiliary,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Clause => "clause",
            Role::Extra => "extra",
            Role::Blocking => "blocking",
            Role::Variable => "variable",
            Role::VariableBlocker => "variable_blocker",
            Role::Padding => "padding",
            Role::Auxiliary => "auxiliary",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Role counts of a gadget. `b` counts the blocking-line lattice points and `b_n`
/// the blockers placed for individual sightlines.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GadgetParams {
    pub m: i64,
    pub n: i64,
    pub n1: i64,
    pub n2: i64,
    pub v: i64,
    pub b_n: i64,
    pub e: i64,
    pub b: i64,
    pub c: i64,
}

/// The closed-form counts: v = 3n1 + 4n2 + n - 1, b_n = 3mn + m·n2 - 3n - n1,
/// e = b_n + 2v - m - 1, b = e + m - 1, c = e + 2m - 2v.
pub fn gadget_params(f: &Formula) -> GadgetParams {
    let m = f.num_clauses() as i64;
    let (n1, n2) = f.occurrence_split();
    let (n1, n2) = (n1 as i64, n2 as i64);
    let n = n1 + n2;
    let v = 3 * n1 + 4 * n2 + n - 1;
    let b_n = 3 * m * n + m * n2 - 3 * n - n1;
    let e = b_n + 2 * v - m - 1;
    GadgetParams { m, n, n1, n2, v, b_n, e, b: e + m - 1, c: e + 2 * m - 2 * v }
}

/// The even-k closed forms: b = b_n, c = 2b_n - v, e = 2b_n - m.
fn gadget_params_even(f: &Formula) -> GadgetParams {
    let p = gadget_params(f);
    GadgetParams { b: p.b_n, c: 2 * p.b_n - p.v, e: 2 * p.b_n - p.m, ..p }
}

/// The two variable-line points a clause takes when `literal` makes it true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub clause: usize,
    pub literal: i32,
    pub points: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub formula: Formula,
    pub k: usize,
    /// 5 or 6: the layout before auxiliary lines were added.
    pub base_k: usize,
    pub points: PointSet,
    pub roles: Vec<Role>,
    pub occurrences: Vec<Occurrence>,
    /// Clauses each variable-line point is meant to see; empty for other points.
    pub sees: Vec<Vec<usize>>,
    pub params: GadgetParams,
    pub counts: GadgetParams,
    pub clause_points: Vec<usize>,
    pub pads: Vec<usize>,
    pub extras: Vec<usize>,
    /// All blocking-line points, left to right.
    pub blocking: Vec<usize>,
    pub construction_blockers: Vec<usize>,
    /// Variable and variable-blocker points, left to right.
    pub variable_line: Vec<usize>,
    /// Variable points hidden from the first padding point.
    pub cut_from_first_pad: Vec<usize>,
    /// Each auxiliary line, left to right.
    pub aux_lines: Vec<Vec<usize>>,
}

impl Gadget {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `index role [var sign clause ...]` per point; clauses are numbered from 1.
    pub fn role_map(&self) -> String {
        let mut s = String::new();
        for (i, r) in self.roles.iter().enumerate() {
            s.push_str(&format!("{i} {r}"));
            let occ: Vec<&Occurrence> = self.occurrences.iter().filter(|o| o.points.contains(&i)).collect();
            if let Some(o) = occ.first() {
                s.push_str(&format!(" {}", o.literal.unsigned_abs()));
                for o in occ {
                    s.push_str(&format!(" {} {}", if o.literal > 0 { '+' } else { '-' }, o.clause + 1));
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn max_coordinate_bits(&self) -> u64 {
        let bits = |r: &Rational| r.numer().bits().max(r.denom().bits());
        self.points.points().iter().map(|p| bits(&p.x).max(bits(&p.y))).max().unwrap_or(0)
    }
}

/// Documented coordinate size bound: numerators and denominators stay within
/// 4·⌈log2(mn + 2)⌉ + 16 bits.
pub fn bit_bound(m: usize, n: usize) -> u64 {
    let x = (m * n + 2) as u64;
    4 * (64 - (x - 1).leading_zeros()) as u64 + 16
}

/// Exact visibility for point sets spread over few horizontal levels: a blocker
/// must sit on a level strictly between the endpoints.
pub(crate) struct Levels {
    by_y: BTreeMap<Rational, (HashSet<Rational>, Vec<Rational>)>,
}

impl Levels {
    pub(crate) fn new(points: &[Point]) -> Self {
        let mut lv = Levels { by_y: BTreeMap::new() };
        for p in points {
            lv.insert(p);
        }
        lv
    }

    pub(crate) fn insert(&mut self, p: &Point) {
        let (set, xs) = self.by_y.entry(p.y.clone()).or_default();
        if set.insert(p.x.clone()) {
            let at = xs.partition_point(|x| x < &p.x);
            xs.insert(at, p.x.clone());
        }
    }

    /// A point strictly inside segment pq, if any.
    pub(crate) fn blocker(&self, p: &Point, q: &Point) -> Option<Point> {
        if p == q {
            return None;
        }
        if p.y == q.y {
            let (lo, hi) = if p.x < q.x { (&p.x, &q.x) } else { (&q.x, &p.x) };
            let xs = &self.by_y.get(&p.y)?.1;
            let at = xs.partition_point(|x| x <= lo);
            return xs.get(at).filter(|x| *x < hi).map(|x| Point::new(x.clone(), p.y.clone()));
        }
        let (lo, hi) = if p.y < q.y { (&p.y, &q.y) } else { (&q.y, &p.y) };
        let slope = (&q.x - &p.x) / (&q.y - &p.y);
        for (y, (set, _)) in self.by_y.range((Excluded(lo.clone()), Excluded(hi.clone()))) {
            let x = &p.x + (y - &p.y) * &slope;
            if set.contains(&x) {
                return Some(Point::new(x, y.clone()));
            }
        }
        None
    }

    pub(crate) fn visible(&self, p: &Point, q: &Point) -> bool {
        self.blocker(p, q).is_none()
    }
}

struct Item {
    var: Option<usize>,
    sees: Vec<usize>,
}

/// Variable-line items in order, and each occurrence as a pair of item indices.
fn layout(f: &Formula) -> Result<(Vec<Item>, Vec<(usize, i32, [usize; 2])>)> {
    let mut items: Vec<Item> = Vec::new();
    let mut occs = Vec::new();
    let used: Vec<usize> =
        (1..=f.num_vars).filter(|&v| f.clauses.iter().flatten().any(|l| l.unsigned_abs() as usize == v)).collect();
    for (pos, &v) in used.iter().enumerate() {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (ci, c) in f.clauses.iter().enumerate() {
            for &l in c {
                if l.unsigned_abs() as usize == v {
                    if l > 0 {
                        plus.push(ci);
                    } else {
                        minus.push(ci);
                    }
                }
            }
        }
        let base = items.len();
        let lit = v as i32;
        let mut push = |sees: Vec<usize>| {
            let mut s = sees;
            s.sort_unstable();
            s.dedup();
            items.push(Item { var: Some(v), sees: s });
        };
        match (plus.len(), minus.len()) {
            (1, 1) => {
                let (j, k) = (plus[0], minus[0]);
                push(vec![j]);
                push(vec![j, k]);
                push(vec![k]);
                occs.push((j, lit, [base, base + 1]));
                occs.push((k, -lit, [base + 1, base + 2]));
            }
            (2, 1) | (1, 2) => {
                let (dbl, single, s) = if plus.len() == 2 { (&plus, minus[0], 1) } else { (&minus, plus[0], -1) };
                let (j, k, l) = (dbl[0], dbl[1], single);
                push(vec![j]);
                push(vec![j, l]);
                push(vec![k, l]);
                push(vec![k]);
                occs.push((j, s * lit, [base, base + 1]));
                occs.push((l, -s * lit, [base + 1, base + 2]));
                occs.push((k, s * lit, [base + 2, base + 3]));
            }
            _ => return Err(Error::Formula(format!("x{v} is not a two- or three-occurrence mixed variable"))),
        }
        if pos + 1 < used.len() {
            items.push(Item { var: None, sees: Vec::new() });
        }
    }
    Ok((items, occs))
}

/// Free and forbidden positions on the blocking line while variable points are placed.
struct Placer<'a> {
    clause_x: &'a [Rational],
    e: i64,
    set: HashSet<Rational>,
    reserved: HashSet<Rational>,
    needed: HashSet<Rational>,
    placed: Vec<Rational>,
    construction: Vec<Rational>,
}

fn crossing(xc: &Rational, xv: &Rational) -> Rational {
    (xc + xv * int(2)) / int(3)
}

impl Placer<'_> {
    /// A variable point at `xv` would hide the blocking point at `beta` from some extra point.
    fn hides_extra(&self, xv: &Rational, beta: &Rational) -> bool {
        let d = xv * int(2) - beta;
        d.is_integer() && !d.is_negative() && d < int(self.e)
    }

    fn try_place(&self, xv: &Rational, sees: &[usize]) -> Option<Vec<Rational>> {
        let m = self.clause_x.len();
        let nb: Vec<Rational> =
            (0..m).filter(|c| !sees.contains(c)).map(|c| crossing(&self.clause_x[c], xv)).collect();
        if nb.iter().any(|b| self.set.contains(b) || self.reserved.contains(b) || self.needed.contains(b)) {
            return None;
        }
        if sees.iter().any(|&c| self.set.contains(&crossing(&self.clause_x[c], xv))) {
            return None;
        }
        if self.set.iter().chain(nb.iter()).any(|b| self.hides_extra(xv, b)) {
            return None;
        }
        if nb.iter().any(|b| self.placed.iter().any(|x| self.hides_extra(x, b))) {
            return None;
        }
        Some(nb)
    }

    fn commit(&mut self, xv: Rational, sees: &[usize], nb: Vec<Rational>) {
        for &c in sees {
            self.needed.insert(crossing(&self.clause_x[c], &xv));
        }
        for b in nb {
            self.set.insert(b.clone());
            self.construction.push(b);
        }
        self.placed.push(xv);
    }
}

fn small_fractions() -> Vec<Rational> {
    let mut out = Vec::new();
    for d in 2..=64i64 {
        for a in 1..d {
            if a.gcd(&d) == 1 {
                out.push(frac(a, d));
            }
        }
    }
    out
}

/// Lays out the base gadget for `k` = 5 or 6.
fn build_base(f: &Formula, k: usize) -> Result<Gadget> {
    f.check_normalized()?;
    let (items, occs) = layout(f)?;
    let m = f.num_clauses();
    let (n1, n2) = f.occurrence_split();
    let n = n1 + n2;
    let v = items.len() as i64;
    let per_item: i64 = items.iter().map(|it| (m - it.sees.len()) as i64).sum();
    let cut_items: Vec<usize> = (0..items.len()).filter(|&t| items[t].sees.contains(&(m - 1))).collect();
    let b_n = per_item + cut_items.len() as i64;
    let mi = m as i64;
    let (e, b, c) = if k == 5 {
        let e = b_n + 2 * v - 5 * mi - 1;
        (e, e + mi - 1, 2 * (b_n - mi - 1))
    } else {
        (2 * b_n - mi, b_n, 2 * b_n - v)
    };
    if e < 0 || c < 0 || b < 0 || (k == 6 && b_n - v + mi < 0) {
        return Err(Error::Construction(format!("negative role count (e={e}, b={b}, c={c})")));
    }
    let clause_x: Vec<Rational> = (0..m).map(|i| int(i as i64 + if k == 5 { 0 } else { 1 })).collect();
    let lattice: Vec<Rational> =
        (0..b).map(|j| if k == 5 { frac(j, 2) } else { int(j) }).collect();
    let mut reserved = HashSet::new();
    if k == 6 {
        // clause and extra points of different parity must keep seeing each other
        let top = mi + e;
        for t in 0..top {
            reserved.insert(frac(2 * t + 1, 2));
        }
    }
    let mut placer = Placer {
        clause_x: &clause_x,
        e,
        set: lattice.iter().cloned().collect(),
        reserved,
        needed: HashSet::new(),
        placed: Vec::new(),
        construction: Vec::new(),
    };
    let x0 = int(e);
    let base_den = (4 * m * n).max(4) as i64;
    for (t, item) in items.iter().enumerate() {
        let mut done = false;
        'search: for refine in 0..8u32 {
            let d = base_den << refine;
            for s in 0..d {
                if refine > 0 && s % 2 == 0 {
                    continue;
                }
                let xv = &x0 + int(t as i64) + frac(s, d);
                if let Some(nb) = placer.try_place(&xv, &item.sees) {
                    placer.commit(xv, &item.sees, nb);
                    done = true;
                    break 'search;
                }
            }
        }
        if !done {
            return Err(Error::Construction(format!("no free position for variable-line point {t}")));
        }
    }

    let vset: HashSet<Rational> = placer.placed.iter().cloned().collect();
    let last_x = clause_x[m - 1].clone();
    let fractions = small_fractions();
    let mut pad_x: Vec<Rational> = Vec::new();
    for j in 0..c {
        let mut found = None;
        for delta in &fractions {
            let xp = &last_x + int(j) + delta;
            let cuts: Vec<Rational> =
                if j == 0 { cut_items.iter().map(|&t| crossing(&xp, &placer.placed[t])).collect() } else { Vec::new() };
            let cut_ok = cuts.iter().all(|cb| {
                !placer.set.contains(cb)
                    && !placer.reserved.contains(cb)
                    && !placer.needed.contains(cb)
                    && !placer.placed.iter().any(|x| placer.hides_extra(x, cb))
            });
            if !cut_ok {
                continue;
            }
            let blocked = |x: &Rational| placer.set.contains(x) || cuts.contains(x);
            let sees_extras = (0..e).all(|xe| {
                !blocked(&((&xp + int(xe)) / int(2))) && !vset.contains(&((&xp + int(3 * xe)) / int(4)))
            });
            let sees_vars = placer
                .placed
                .iter()
                .enumerate()
                .all(|(t, xv)| (j == 0 && cut_items.contains(&t)) || !blocked(&crossing(&xp, xv)));
            if sees_extras && sees_vars {
                found = Some((xp, cuts));
                break;
            }
        }
        let Some((xp, cuts)) = found else {
            return Err(Error::Construction(format!("no free position for padding point {j}")));
        };
        for cb in cuts {
            placer.set.insert(cb.clone());
            placer.construction.push(cb);
        }
        pad_x.push(xp);
    }

    let mut pts: Vec<Point> = Vec::new();
    let mut roles: Vec<Role> = Vec::new();
    let push = |p: Point, r: Role, pts: &mut Vec<Point>, roles: &mut Vec<Role>| {
        pts.push(p);
        roles.push(r);
        pts.len() - 1
    };
    let clause_points: Vec<usize> =
        clause_x.iter().map(|x| push(Point::new(x.clone(), int(0)), Role::Clause, &mut pts, &mut roles)).collect();
    let pads: Vec<usize> =
        pad_x.iter().map(|x| push(Point::new(x.clone(), int(0)), Role::Padding, &mut pts, &mut roles)).collect();
    let extras: Vec<usize> =
        (0..e).map(|j| push(Point::new(int(j), int(-2)), Role::Extra, &mut pts, &mut roles)).collect();
    let mut line: Vec<(Rational, bool)> = lattice.iter().map(|x| (x.clone(), false)).collect();
    line.extend(placer.construction.iter().map(|x| (x.clone(), true)));
    line.sort();
    let mut blocking = Vec::new();
    let mut construction_blockers = Vec::new();
    for (x, placed) in line {
        let i = push(Point::new(x, int(-1)), Role::Blocking, &mut pts, &mut roles);
        blocking.push(i);
        if placed {
            construction_blockers.push(i);
        }
    }
    let mut sees = vec![Vec::new(); pts.len()];
    let mut variable_line = Vec::new();
    for (t, item) in items.iter().enumerate() {
        let r = if item.var.is_some() { Role::Variable } else { Role::VariableBlocker };
        let i = push(Point::new(placer.placed[t].clone(), frac(-3, 2)), r, &mut pts, &mut roles);
        sees.push(item.sees.clone());
        variable_line.push(i);
    }
    let occurrences = occs
        .iter()
        .map(|&(clause, literal, [a, b])| Occurrence { clause, literal, points: [variable_line[a], variable_line[b]] })
        .collect();
    let cut_from_first_pad = cut_items.iter().map(|&t| variable_line[t]).collect();
    let counts = GadgetParams { m: mi, n: n as i64, n1: n1 as i64, n2: n2 as i64, v, b_n, e, b, c };
    let params = if k == 5 { gadget_params(f) } else { gadget_params_even(f) };
    Ok(Gadget {
        formula: f.clone(),
        k,
        base_k: k,
        points: PointSet::new(pts)?,
        roles,
        occurrences,
        sees,
        params,
        counts,
        clause_points,
        pads,
        extras,
        blocking,
        construction_blockers,
        variable_line,
        cut_from_first_pad,
        aux_lines: Vec::new(),
    })
}

/// Adds `lines` horizontal lines of 2y points above the clause line (y = number of
/// groups). Each new point sees every point off its own line; on its own line
/// only its neighbours, since the line's points are collinear.
fn add_aux_lines(g: &mut Gadget, lines: usize) -> Result<()> {
    let groups = g.points.len() / g.base_k;
    let mut pts = g.points.points().to_vec();
    let mut levels = Levels::new(&pts);
    let fractions = small_fractions();
    for t in 0..lines {
        let y = int(1 + t as i64);
        let mut idx = Vec::with_capacity(2 * groups);
        for j in 0..2 * groups {
            let found = fractions.iter().map(|d| Point::new(int(j as i64) + d, y.clone())).find(|a| {
                pts.iter().filter(|q| q.y != y).all(|q| levels.visible(a, q))
            });
            let Some(a) = found else {
                return Err(Error::Construction(format!("no free position on auxiliary line {t}")));
            };
            levels.insert(&a);
            pts.push(a);
            g.roles.push(Role::Auxiliary);
            g.sees.push(Vec::new());
            idx.push(pts.len() - 1);
        }
        g.aux_lines.push(idx);
    }
    g.points = PointSet::new(pts)?;
    Ok(())
}

/// Builds and audits the gadget for K_k partitions, k ≥ 5.
pub fn build_gadget(f: &Formula, k: usize) -> Result<Gadget> {
    if k < 5 {
        return Err(Error::Precondition(format!("k = {k} is below 5")));
    }
    let g = if k == 5 { build_base(f, 5)? } else { extend_unchecked(&build_base(f, 5)?, k)? };
    let report = audit_gadget(&g);
    if !report.passed() {
        return Err(Error::Audit(report.to_string()));
    }
    Ok(g)
}

/// Odd k adds (k-5)/2 auxiliary lines to the K5 layout; even k rebuilds with the
/// K6 layout and adds (k-6)/2 lines.
pub fn extend_gadget(g: &Gadget, k: usize) -> Result<Gadget> {
    if k < 6 {
        return Err(Error::Precondition(format!("extension needs k ≥ 6, got {k}")));
    }
    let out = extend_unchecked(g, k)?;
    let report = audit_gadget(&out);
    if !report.passed() {
        return Err(Error::Audit(report.to_string()));
    }
    Ok(out)
}

fn extend_unchecked(g: &Gadget, k: usize) -> Result<Gadget> {
    let mut base = if k % 2 == 1 {
        if g.base_k == 5 && g.aux_lines.is_empty() {
            g.clone()
        } else {
            build_base(&g.formula, 5)?
        }
    } else {
        build_base(&g.formula, 6)?
    };
    let lines = (k - base.base_k) / 2;
    add_aux_lines(&mut base, lines)?;
    base.k = k;
    Ok(base)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub clause_extra: bool,
    pub bindings: bool,
    pub padding: bool,
    pub blocking_extra: bool,
    pub auxiliary: bool,
    pub counts_as_built: bool,
    pub counts_match_formulas: bool,
    pub size_divisible: bool,
    pub max_bits: u64,
    pub bit_bound: u64,
    /// The constructed partition for a satisfying assignment verified; `None` when
    /// the formula is unsatisfiable or too large to solve by enumeration.
    pub partition: Option<bool>,
    pub issues: Vec<String>,
}

impl AuditReport {
    /// Everything except agreement with the closed-form counts, which is reported
    /// separately.
    pub fn passed(&self) -> bool {
        self.clause_extra
            && self.bindings
            && self.padding
            && self.blocking_extra
            && self.auxiliary
            && self.counts_as_built
            && self.size_divisible
            && self.max_bits <= self.bit_bound
            && self.partition != Some(false)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |b: bool| if b { "passed" } else { "FAILED" };
        writeln!(f, "clause/extra invisibility: {}", w(self.clause_extra))?;
        writeln!(f, "variable-point bindings: {}", w(self.bindings))?;
        writeln!(f, "padding visibility: {}", w(self.padding))?;
        writeln!(f, "blocking/extra visibility: {}", w(self.blocking_extra))?;
        writeln!(f, "auxiliary lines: {}", w(self.auxiliary))?;
        writeln!(f, "role counts (as built): {}", w(self.counts_as_built))?;
        writeln!(
            f,
            "role counts (closed forms): {}",
            if self.counts_match_formulas { "equal" } else { "differ" }
        )?;
        writeln!(f, "size divisible by k: {}", w(self.size_divisible))?;
        writeln!(f, "coordinate bits: {} (bound {})", self.max_bits, self.bit_bound)?;
        match self.partition {
            Some(ok) => writeln!(f, "partition from a satisfying assignment: {}", w(ok))?,
            None => writeln!(f, "partition from a satisfying assignment: skipped")?,
        }
        for i in &self.issues {
            writeln!(f, "issue: {i}")?;
        }
        Ok(())
    }
}

pub fn audit_gadget(g: &Gadget) -> AuditReport {
    let pts = g.points.points();
    let levels = Levels::new(pts);
    let mut r = AuditReport { max_bits: g.max_coordinate_bits(), ..Default::default() };
    let issue = |r: &mut AuditReport, msg: String| {
        if r.issues.len() < 20 {
            r.issues.push(msg);
        }
    };
    let describe = |i: usize, j: usize| -> String {
        match levels.blocker(&pts[i], &pts[j]) {
            Some(b) => format!("{i} ({}) and {j} ({}) blocked by ({})", pts[i], pts[j], b),
            None => format!("{i} ({}) and {j} ({}) see each other", pts[i], pts[j]),
        }
    };

    r.clause_extra = true;
    for &cp in &g.clause_points {
        for &ep in &g.extras {
            let want = g.base_k == 6 && !(&pts[cp].x + &pts[ep].x).to_integer().is_even();
            if levels.visible(&pts[cp], &pts[ep]) != want {
                r.clause_extra = false;
                issue(&mut r, format!("clause/extra: {}", describe(cp, ep)));
            }
        }
    }

    r.bindings = true;
    for &vp in &g.variable_line {
        for (c, &cp) in g.clause_points.iter().enumerate() {
            if levels.visible(&pts[vp], &pts[cp]) != g.sees[vp].contains(&c) {
                r.bindings = false;
                issue(&mut r, format!("binding: {}", describe(vp, cp)));
            }
        }
    }

    r.padding = true;
    for (j, &pp) in g.pads.iter().enumerate() {
        for &q in g.extras.iter().chain(&g.blocking).chain(&g.variable_line) {
            let want = !(j == 0 && g.cut_from_first_pad.contains(&q));
            if levels.visible(&pts[pp], &pts[q]) != want {
                r.padding = false;
                issue(&mut r, format!("padding: {}", describe(pp, q)));
            }
        }
    }

    r.blocking_extra = true;
    for &bp in &g.blocking {
        for &ep in &g.extras {
            if !levels.visible(&pts[bp], &pts[ep]) {
                r.blocking_extra = false;
                issue(&mut r, format!("blocking/extra: {}", describe(bp, ep)));
            }
        }
    }

    r.auxiliary = true;
    for (t, line) in g.aux_lines.iter().enumerate() {
        for (j, &a) in line.iter().enumerate() {
            for q in 0..pts.len() {
                let same_line = g.aux_lines[t].contains(&q);
                let want = !same_line || line.get(j + 1) == Some(&q) || (j > 0 && line[j - 1] == q);
                if q != a && levels.visible(&pts[a], &pts[q]) != want {
                    r.auxiliary = false;
                    issue(&mut r, format!("auxiliary: {}", describe(a, q)));
                }
            }
        }
    }

    let count = |role: Role| g.roles.iter().filter(|&&x| x == role).count() as i64;
    let matches = |p: &GadgetParams| {
        count(Role::Clause) == p.m
            && count(Role::Extra) == p.e
            && count(Role::Blocking) == p.b + p.b_n
            && count(Role::Variable) + count(Role::VariableBlocker) == p.v
            && count(Role::VariableBlocker) == p.n - 1
            && count(Role::Padding) == p.c
    };
    r.counts_as_built = matches(&g.counts) && g.construction_blockers.len() as i64 == g.counts.b_n;
    r.counts_match_formulas = matches(&g.params);
    r.size_divisible = g.points.len() % g.k == 0;
    r.bit_bound = bit_bound(g.formula.num_clauses(), g.counts.n as usize);
    if !r.counts_as_built {
        issue(&mut r, "role counts differ from the recorded build counts".into());
    }

    if g.formula.num_vars <= 20 {
        if let Ok(Some(a)) = brute_force_sat(&g.formula) {
            match build_partition_from_assignment(g, &a) {
                Ok(_) => r.partition = Some(true),
                Err(e) => {
                    r.partition = Some(false);
                    issue(&mut r, format!("partition: {e}"));
                }
            }
        }
    }
    r
}
