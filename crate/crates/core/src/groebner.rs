//! Buchberger engine for submodules of free modules over the ambient
//! polynomial ring, with optional cofactor tracking and degree truncation.
//!
//! Quotient rings never appear here: callers append the quotient ideal's
//! columns as extra generators, so every computation is over F_p[x_1..x_n].

use crate::error::{Error, Result};
use crate::fp::Fp;
use crate::modelem::{ArithCtx, ModElem};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use std::collections::BinaryHeap;

#[derive(Debug, Clone)]
pub struct ModuleGB {
    pub rank: usize,
    /// Monic, fully reduced, sorted by lead (position, then monomial
    /// descending); unique for a given submodule and order.
    pub gens: Vec<ModElem>,
    /// exprs[k] expresses gens[k] over the input generators exactly, over the
    /// ambient polynomial ring; present only when tracking was requested.
    /// Indexed against the original input list, zero inputs included.
    pub exprs: Option<Vec<Vec<Polynomial>>>,
    /// Lead position -> generator indices, for division.
    index: Vec<Vec<usize>>,
}

impl ModuleGB {
    fn build_index(rank: usize, gens: &[ModElem]) -> Vec<Vec<usize>> {
        let mut index = vec![Vec::new(); rank];
        for (k, g) in gens.iter().enumerate() {
            let (pos, _, _) = g.lead().expect("basis elements are nonzero");
            index[pos].push(k);
        }
        index
    }

    /// Wrap rows that already form a reduced basis (monic, mutually reduced).
    pub fn from_reduced(rank: usize, gens: Vec<ModElem>) -> ModuleGB {
        let index = ModuleGB::build_index(rank, &gens);
        ModuleGB { rank, gens, exprs: None, index }
    }

    pub fn contains(&self, v: &ModElem, ctx: ArithCtx) -> bool {
        normal_form(v, self, ctx).is_zero()
    }
}

/// One basis row: the element plus, when tracking, its expression over the
/// original inputs.
#[derive(Clone)]
struct Row {
    elem: ModElem,
    expr: Option<Vec<Polynomial>>,
}

struct Pair {
    degree: i64,
    i: usize,
    j: usize,
}

impl PartialEq for Pair {
    fn eq(&self, other: &Self) -> bool {
        (self.degree, self.i, self.j) == (other.degree, other.i, other.j)
    }
}
impl Eq for Pair {}
impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Pair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // BinaryHeap is a max-heap; reverse so lowest degree pops first.
        (other.degree, other.i, other.j).cmp(&(self.degree, self.i, self.j))
    }
}

#[derive(Default)]
pub struct BuchbergerOptions<'a> {
    pub track: bool,
    /// Generator twists of the ambient free module; used only to grade
    /// S-pairs for the degree cap.
    pub twists: Option<&'a [i64]>,
    /// Skip S-pairs whose degree exceeds the cap. The result is a basis of
    /// the submodule in all degrees <= cap.
    pub degree_cap: Option<i64>,
}

/// Reduced Groebner basis of the submodule of R^rank spanned by `inputs`.
pub fn buchberger(
    ctx: ArithCtx,
    rank: usize,
    inputs: &[ModElem],
    opts: BuchbergerOptions,
) -> ModuleGB {
    let mut rows: Vec<Row> = Vec::new();
    let mut index: Vec<Vec<usize>> = vec![Vec::new(); rank];
    let mut pairs: BinaryHeap<Pair> = BinaryHeap::new();

    let insert = |rows: &mut Vec<Row>,
                      index: &mut Vec<Vec<usize>>,
                      pairs: &mut BinaryHeap<Pair>,
                      elem: ModElem,
                      expr: Option<Vec<Polynomial>>| {
        let (pos, mono, _) = elem.lead().expect("nonzero");
        let k = rows.len();
        for &other in &index[pos] {
            let row = &rows[other];
            let (_, m2, _) = row.elem.lead().unwrap();
            // coprime-lead pairs of single-position elements reduce to zero
            if elem.comps.len() == 1
                && row.elem.comps.len() == 1
                && mono.lcm(m2).degree() == mono.degree() + m2.degree()
            {
                continue;
            }
            let degree = mono.lcm(m2).degree() as i64
                + opts.twists.map_or(0, |t| t[pos]);
            if opts.degree_cap.is_some_and(|cap| degree > cap) {
                continue;
            }
            pairs.push(Pair { degree, i: other, j: k });
        }
        index[pos].push(k);
        rows.push(Row { elem, expr });
    };

    // seed with the nonzero inputs, made monic
    for (j, input) in inputs.iter().enumerate() {
        if input.is_zero() {
            continue;
        }
        let lc = input.lead().unwrap().2;
        let inv = ctx.field.inv(lc).unwrap();
        let elem = input.scale(inv, ctx);
        let expr = opts.track.then(|| {
            let mut e = vec![Polynomial::zero(); inputs.len()];
            e[j] = Polynomial::constant(inv, ctx.nvars);
            e
        });
        insert(&mut rows, &mut index, &mut pairs, elem, expr);
    }

    while let Some(Pair { i, j, .. }) = pairs.pop() {
        let (pi, mi, _) = rows[i].elem.lead().unwrap();
        let (pj, mj, _) = rows[j].elem.lead().unwrap();
        debug_assert_eq!(pi, pj);
        let lcm = mi.lcm(mj);
        let (ti, tj) = (mi.div_into(&lcm), mj.div_into(&lcm));
        // both rows are monic
        let a = rows[i].elem.mul_term(&ti, Fp(1), ctx);
        let b = rows[j].elem.mul_term(&tj, Fp(1), ctx);
        let s = a.sub(&b, ctx);
        let s_expr = opts.track.then(|| {
            combine_exprs(
                ctx,
                rows[i].expr.as_ref().unwrap(),
                &ti,
                Fp(1),
                rows[j].expr.as_ref().unwrap(),
                &tj,
                ctx.field.neg(Fp(1)),
            )
        });
        let (red, cof) = reduce_full(&s, &rows, &index, ctx, opts.track);
        if red.is_zero() {
            continue;
        }
        let expr = s_expr.map(|e| apply_cofactors(ctx, e, cof.unwrap(), &rows));
        let lc = red.lead().unwrap().2;
        let inv = ctx.field.inv(lc).unwrap();
        let elem = red.scale(inv, ctx);
        let expr = expr.map(|e| scale_expr(ctx, e, inv));
        insert(&mut rows, &mut index, &mut pairs, elem, expr);
    }

    let mut gens = interreduce(rows, ctx);
    gens.sort_by(|a, b| {
        let (pa, ma, _) = a.elem.lead().unwrap();
        let (pb, mb, _) = b.elem.lead().unwrap();
        pa.cmp(&pb).then_with(|| mb.cmp_order(ma, ctx.order))
    });
    let exprs = opts
        .track
        .then(|| gens.iter().map(|r| r.expr.clone().unwrap()).collect());
    let gens: Vec<ModElem> = gens.into_iter().map(|r| r.elem).collect();
    let index = ModuleGB::build_index(rank, &gens);
    ModuleGB { rank, gens, exprs, index }
}

fn scale_expr(ctx: ArithCtx, expr: Vec<Polynomial>, c: Fp) -> Vec<Polynomial> {
    expr.into_iter().map(|p| p.scale(c, ctx.field)).collect()
}

/// expr := expr - sum q_k * rows[k].expr, mirroring the element reduction.
fn apply_cofactors(
    ctx: ArithCtx,
    mut expr: Vec<Polynomial>,
    cof: Vec<(usize, Polynomial)>,
    rows: &[Row],
) -> Vec<Polynomial> {
    for (k, q) in cof {
        if q.is_zero() {
            continue;
        }
        for (t, re) in rows[k].expr.as_ref().unwrap().iter().enumerate() {
            if re.is_zero() {
                continue;
            }
            let prod = re.mul(&q, ctx.field, ctx.order);
            expr[t] = expr[t].sub(&prod, ctx.field, ctx.order);
        }
    }
    expr
}

fn combine_exprs(
    ctx: ArithCtx,
    ea: &[Polynomial],
    ma: &Monomial,
    ca: Fp,
    eb: &[Polynomial],
    mb: &Monomial,
    cb: Fp,
) -> Vec<Polynomial> {
    ea.iter()
        .zip(eb)
        .map(|(a, b)| {
            a.mul_term(ma, ca, ctx.field)
                .add(&b.mul_term(mb, cb, ctx.field), ctx.field, ctx.order)
        })
        .collect()
}

/// Access to the element part of a reducer row.
trait HasElem {
    fn elem(&self) -> &ModElem;
}
impl HasElem for Row {
    fn elem(&self) -> &ModElem {
        &self.elem
    }
}
impl HasElem for ModElem {
    fn elem(&self) -> &ModElem {
        self
    }
}

/// Full normal form of v against the rows, optionally collecting cofactors
/// (row index, quotient) with v = rem + sum q_k * rows[k].
fn reduce_full<T: HasElem>(
    v: &ModElem,
    rows: &[T],
    index: &[Vec<usize>],
    ctx: ArithCtx,
    track: bool,
) -> (ModElem, Option<Vec<(usize, Polynomial)>>) {
    let mut work = v.clone();
    let mut rem = ModElem::zero();
    let mut cof: Vec<(usize, Polynomial)> = Vec::new();
    'outer: while let Some((pos, mono, coeff)) =
        work.lead().map(|(p, m, c)| (p, m.clone(), c))
    {
        if pos < index.len() {
            for &k in &index[pos] {
                let (_, mk, _) = rows[k].elem().lead().unwrap();
                if mk.divides(&mono) {
                    let t = mk.div_into(&mono);
                    // reducer is monic
                    work = work.sub(&rows[k].elem().mul_term(&t, coeff, ctx), ctx);
                    if track {
                        cof.push((k, Polynomial::monomial(t, coeff)));
                    }
                    continue 'outer;
                }
            }
        }
        // irreducible lead: move it to the remainder
        strip_lead_into(&mut work, &mut rem, pos, mono, coeff);
    }
    (rem, track.then_some(cof))
}

/// Remove the lead term (pos, mono, coeff) from work and append it to rem.
/// Leads arrive in strictly decreasing position-over-term order, so pushing
/// at the end of rem's lists keeps everything sorted.
fn strip_lead_into(work: &mut ModElem, rem: &mut ModElem, pos: usize, mono: Monomial, coeff: Fp) {
    let comp = &mut work.comps[0];
    debug_assert_eq!(comp.0, pos);
    comp.1.terms.remove(0);
    if comp.1.terms.is_empty() {
        work.comps.remove(0);
    }
    match rem.comps.last_mut() {
        Some((p, poly)) if *p == pos => poly.terms.push((mono, coeff)),
        _ => rem
            .comps
            .push((pos, Polynomial { terms: vec![(mono, coeff)] })),
    }
}

/// Minimalize (drop rows whose lead is divisible by another kept row's lead)
/// then tail-reduce each survivor. One pass against the unreduced survivors
/// suffices: a full normal form of the tail is canonical against the leads,
/// which tail reduction never changes, and no lead divides its own tail.
fn interreduce(rows: Vec<Row>, ctx: ArithCtx) -> Vec<Row> {
    let mut order_idx: Vec<usize> = (0..rows.len()).collect();
    // ascending lead order so divisors are kept before their multiples
    order_idx.sort_by(|&a, &b| {
        let (pa, ma, _) = rows[a].elem.lead().unwrap();
        let (pb, mb, _) = rows[b].elem.lead().unwrap();
        pa.cmp(&pb).then_with(|| ma.cmp_order(mb, ctx.order))
    });
    let mut slots: Vec<Option<Row>> = rows.into_iter().map(Some).collect();
    let mut kept: Vec<Row> = Vec::new();
    let mut by_pos: std::collections::HashMap<usize, Vec<usize>> =
        std::collections::HashMap::new();
    'next: for idx in order_idx {
        let row = slots[idx].take().unwrap();
        let (p, m, _) = row.elem.lead().unwrap();
        if let Some(list) = by_pos.get(&p) {
            for &ki in list {
                let (_, mk, _) = kept[ki].elem.lead().unwrap();
                if mk.divides(m) {
                    continue 'next;
                }
            }
        }
        by_pos.entry(p).or_default().push(kept.len());
        kept.push(row);
    }

    let rank = kept
        .iter()
        .map(|r| r.elem.max_position().unwrap_or(0) + 1)
        .max()
        .unwrap_or(1);
    let mut index = vec![Vec::new(); rank];
    for (k, r) in kept.iter().enumerate() {
        let (pos, _, _) = r.elem.lead().unwrap();
        index[pos].push(k);
    }
    let mut out: Vec<Row> = Vec::with_capacity(kept.len());
    for row in &kept {
        let track = row.expr.is_some();
        let (pos, mono, coeff) = {
            let (p, m, c) = row.elem.lead().unwrap();
            (p, m.clone(), c)
        };
        let tail = row.elem.sub(
            &ModElem::single(pos, Polynomial::monomial(mono.clone(), coeff)),
            ctx,
        );
        let (red_tail, cof) = reduce_full(&tail, &kept, &index, ctx, track);
        let elem = ModElem::single(pos, Polynomial::monomial(mono, coeff)).add(&red_tail, ctx);
        let expr = row
            .expr
            .clone()
            .map(|e| apply_cofactors(ctx, e, cof.unwrap(), &kept));
        out.push(Row { elem, expr });
    }
    out
}

/// Canonical normal form against a reduced basis.
pub fn normal_form(v: &ModElem, gb: &ModuleGB, ctx: ArithCtx) -> ModElem {
    reduce_full(v, &gb.gens, &gb.index, ctx, false).0
}

/// Normal form plus cofactors over the basis: v = rem + sum q_k * gens[k].
pub fn normal_form_with_cofactors(
    v: &ModElem,
    gb: &ModuleGB,
    ctx: ArithCtx,
) -> (ModElem, Vec<Polynomial>) {
    let (rem, cof) = reduce_full(v, &gb.gens, &gb.index, ctx, true);
    let mut out = vec![Polynomial::zero(); gb.gens.len()];
    for (k, q) in cof.unwrap() {
        out[k] = out[k].add(&q, ctx.field, ctx.order);
    }
    (rem, out)
}

/// Check v's positions fit the basis rank.
pub fn check_rank(gb: &ModuleGB, v: &ModElem) -> Result<()> {
    if let Some(m) = v.max_position() {
        if m >= gb.rank {
            return Err(Error::RankMismatch { expected: gb.rank, got: m + 1 });
        }
    }
    Ok(())
}

/// Generators of the syzygy module of `cols` (elements of R^rank), relative
/// to `extra_relations`: each output tau satisfies cols . tau in
/// span(extra_relations).
///
/// Works via a basis of {(col_j, e_j)} u {(r, 0)} in R^(rank+s) under
/// position-over-term, where the first block dominates: basis elements with
/// zero first block are exactly the relative syzygies.
pub fn kernel_with_relations(
    ctx: ArithCtx,
    rank: usize,
    cols: &[ModElem],
    extra_relations: &[ModElem],
    twists_for_cap: Option<&[i64]>,
    degree_cap: Option<i64>,
) -> Vec<ModElem> {
    let s = cols.len();
    let mut inputs: Vec<ModElem> = Vec::with_capacity(s + extra_relations.len());
    for (j, col) in cols.iter().enumerate() {
        let mut e = col.clone();
        e.comps.push((rank + j, Polynomial::one(ctx.nvars)));
        inputs.push(e);
    }
    inputs.extend(extra_relations.iter().cloned());
    let opts = BuchbergerOptions { track: false, twists: twists_for_cap, degree_cap };
    let gb = buchberger(ctx, rank + s, &inputs, opts);
    let mut out = Vec::new();
    for g in &gb.gens {
        if g.comps.first().is_none_or(|(p, _)| *p >= rank) {
            let tau = ModElem {
                comps: g.comps.iter().map(|(p, q)| (*p - rank, q.clone())).collect(),
            };
            if !tau.is_zero() {
                out.push(tau);
            }
        }
    }
    out
}
