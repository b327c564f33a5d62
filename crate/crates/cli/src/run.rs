//! Session execution: declarations build state, commands emit one report
//! line each. Reports are byte-deterministic for a fixed script, seed, and
//! flag set; JSON objects always carry the keys {bound, certificates,
//! command, inputs, seed, verdict}.

use std::collections::HashMap;

use grmod::{
    cosyzygy, check_resolving_witness, depth, ext, ext_vanishing_dim, free_resolution, gc_dim,
    grade, hom, is_grade_consistent, is_isomorphic, is_semidualizing, is_totally_reflexive,
    lambda_member, syzygy, tor, transpose, transpose_ses, validate_primes, Bounded, Dualizer,
    Error, FpModule, GradeConsistency, GradeFnTable, GradeViolation, IsoVerdict, LambdaVerdict,
    Matrix, MKind, ModElem, ModuleMap, NotIsoReason, Polynomial, Prime, PrimeRecord,
    ResolvingWitness, Ring, SemidualFailure, SemidualVerdict, TotRefFailure, TotRefVerdict,
    WitnessNode, WitnessVerdict,
};
use grmod::{parse_ring, poly_to_string};
use serde_json::{json, Value};

use crate::session::{
    print_command, Command, Decl, GradeValue, Item, KindArg, NodeSyntax, PrimesArg, Session,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy)]
pub struct Flags {
    pub bound: usize,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
}

struct State {
    ring: Ring,
    modules: HashMap<String, FpModule>,
    dualizers: HashMap<String, Dualizer>,
    /// Declaration order; validated anew for each prime-list argument.
    prime_records: Vec<PrimeRecord>,
    gradefns: HashMap<String, GradeFnTable>,
}

impl State {
    /// Parser guarantees the name is a declared module or dualizer.
    fn module(&self, name: &str) -> &FpModule {
        self.modules
            .get(name)
            .unwrap_or_else(|| &self.dualizers[name].module)
    }

    fn dualizer(&self, name: &str) -> &Dualizer {
        &self.dualizers[name]
    }

    fn modules_named(&self, names: &[String]) -> Vec<FpModule> {
        names.iter().map(|n| self.module(n).clone()).collect()
    }

    /// The chosen primes in declaration order, revalidated as a standalone
    /// list; declared inclusions leaving the selection are dropped, so
    /// verdicts are relative to exactly the listed primes.
    fn select_primes(&self, arg: &PrimesArg) -> Result<Vec<Prime>, Error> {
        let chosen: Vec<&PrimeRecord> = match arg {
            PrimesArg::All => self.prime_records.iter().collect(),
            PrimesArg::Named(names) => self
                .prime_records
                .iter()
                .filter(|r| names.contains(&r.label))
                .collect(),
        };
        let labels: Vec<&str> = chosen.iter().map(|r| r.label.as_str()).collect();
        let records: Vec<PrimeRecord> = chosen
            .iter()
            .map(|r| PrimeRecord {
                label: r.label.clone(),
                gens: r.gens.clone(),
                declared_inclusions: r
                    .declared_inclusions
                    .iter()
                    .filter(|l| labels.contains(&l.as_str()))
                    .cloned()
                    .collect(),
            })
            .collect();
        validate_primes(&self.ring, &records)
    }

    fn kind<'a>(&'a self, arg: &KindArg) -> MKind<'a> {
        match arg {
            KindArg::Projective => MKind::Projectives,
            KindArg::Dualizer(name) => MKind::Dualizer(self.dualizer(name)),
        }
    }
}

fn bounded_json(b: Bounded) -> Value {
    match b {
        Bounded::Finite(n) => json!(n),
        Bounded::Infinite => json!("infinity"),
    }
}

fn elem_string(e: &ModElem, vars: &[String]) -> String {
    if e.comps.is_empty() {
        return "0".to_string();
    }
    e.comps
        .iter()
        .map(|(pos, p)| format!("({})*e{}", poly_to_string(p, vars), pos))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Rank, generator degrees, and relations of the minimal presentation.
fn module_summary(m: &FpModule, vars: &[String]) -> Value {
    let min = m.minimal_presentation();
    let relations: Vec<String> = min.relations.cols.iter().map(|c| elem_string(c, vars)).collect();
    json!({
        "degrees": min.gen_degrees,
        "rank": min.rank(),
        "relations": relations,
    })
}

fn matrix_strings(m: &Matrix, vars: &[String]) -> Vec<String> {
    m.cols.iter().map(|c| elem_string(c, vars)).collect()
}

/// Grid rows index ambient positions, grid columns index map columns.
fn grid_to_matrix(ring: &Ring, rows: &[Vec<String>]) -> Result<Matrix, Error> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut cols = Vec::with_capacity(ncols);
    for j in 0..ncols {
        let mut dense: Vec<Polynomial> = Vec::with_capacity(rows.len());
        for row in rows {
            dense.push(ring.parse_poly(&row[j])?);
        }
        cols.push(ModElem::from_dense(dense));
    }
    Ok(Matrix::new(rows.len(), cols))
}

fn kind_json(k: &KindArg) -> Value {
    match k {
        KindArg::Projective => json!("projective"),
        KindArg::Dualizer(d) => json!({ "dualizer": d }),
    }
}

fn primes_json(p: &PrimesArg) -> Value {
    match p {
        PrimesArg::All => json!("all"),
        PrimesArg::Named(ps) => json!(ps),
    }
}

fn table_json(t: &GradeFnTable) -> Value {
    let mut obj = serde_json::Map::new();
    for (label, v) in t {
        obj.insert(label.clone(), bounded_json(*v));
    }
    Value::Object(obj)
}

/// The minimal syzygy presentation sequence 0 -> syz X -> F -> X -> 0.
fn syzygy_sequence(x: &FpModule) -> Result<(ModuleMap, ModuleMap), Error> {
    let ring = &x.ring;
    let min = x.minimal_presentation();
    let rank = min.rank();
    let cover = FpModule::free(ring.clone(), min.gen_degrees.clone());
    let res = free_resolution(&min, 1);
    let omega = syzygy(&min, 1);
    let d1 = if res.differentials.is_empty() {
        Matrix::new(rank, vec![])
    } else {
        res.differentials[0].clone()
    };
    let incl = ModuleMap::new(omega, cover.clone(), d1)?;
    let proj = ModuleMap::new(cover, min, Matrix::identity(rank, ring.nvars()))?;
    Ok((incl, proj))
}

fn apply_decl(st: &mut Option<State>, d: &Decl, flags: &Flags) -> Result<(), Error> {
    match d {
        Decl::Ring { p, vars, order, ideal, .. } => {
            let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            let ideal_refs: Vec<&str> = ideal.iter().map(|s| s.as_str()).collect();
            let ring = parse_ring(*p, &var_refs, order, &ideal_refs)?;
            *st = Some(State {
                ring,
                modules: HashMap::new(),
                dualizers: HashMap::new(),
                prime_records: Vec::new(),
                gradefns: HashMap::new(),
            });
            Ok(())
        }
        Decl::Module { name, rows, degrees } => {
            let st = st.as_mut().expect("ring declared first");
            let cols = grid_to_matrix(&st.ring, rows)?.cols;
            let degs = degrees.clone().unwrap_or_else(|| vec![0; rows.len()]);
            let m = FpModule::new(st.ring.clone(), degs, cols)?;
            st.modules.insert(name.clone(), m);
            Ok(())
        }
        Decl::Dualizer { name, module } => {
            let st = st.as_mut().expect("ring declared first");
            let m = st.module(module).clone();
            let d = Dualizer::certify(&m, flags.bound)?;
            st.dualizers.insert(name.clone(), d);
            Ok(())
        }
        Decl::Prime { name, gens, inclusions } => {
            let st = st.as_mut().expect("ring declared first");
            let parsed: Result<Vec<Polynomial>, Error> =
                gens.iter().map(|g| st.ring.parse_poly(g)).collect();
            st.prime_records.push(PrimeRecord {
                label: name.clone(),
                gens: parsed?,
                declared_inclusions: inclusions.clone(),
            });
            // surfaces bad ideals and unverifiable containments immediately
            validate_primes(&st.ring, &st.prime_records)?;
            Ok(())
        }
        Decl::GradeFn { name, entries } => {
            let st = st.as_mut().expect("ring declared first");
            let mut table = GradeFnTable::new();
            for (label, v) in entries {
                let b = match v {
                    GradeValue::Finite(n) => Bounded::Finite(*n),
                    GradeValue::Infinity => Bounded::Infinite,
                };
                table.insert(label.clone(), b);
            }
            st.gradefns.insert(name.clone(), table);
            Ok(())
        }
    }
}

/// Verdict, certificates, and the effective bound (None when unbounded).
type Outcome = (Value, Value, Option<usize>);

fn exec(st: &State, flags: &Flags, cmd: &Command) -> Result<Outcome, Error> {
    let vars = st.ring.vars();
    match cmd {
        Command::Semidual { module, bound } => {
            let eff = bound.unwrap_or(flags.bound);
            let v = is_semidualizing(st.module(module), eff)?;
            let (verdict, certs) = match v {
                SemidualVerdict::Pass { bound } => (json!("Pass"), json!({ "checked_to": bound })),
                SemidualVerdict::Fail(f) => {
                    let certs = match f {
                        SemidualFailure::HomothetyNotInjective => {
                            json!({"failure": "homothety_not_injective"})
                        }
                        SemidualFailure::HomothetyNotSurjective => {
                            json!({"failure": "homothety_not_surjective"})
                        }
                        SemidualFailure::ExtNonzero { index, witness } => json!({
                            "failure": "ext_nonzero",
                            "index": index,
                            "witness": module_summary(&witness, vars),
                        }),
                    };
                    (json!("Fail"), certs)
                }
            };
            Ok((verdict, certs, Some(eff)))
        }
        Command::Totref { module, dualizer, bound } => {
            let eff = bound.unwrap_or(flags.bound);
            let v = is_totally_reflexive(st.module(module), st.dualizer(dualizer), eff)?;
            let (verdict, certs) = match v {
                TotRefVerdict::Pass { bound } => (json!("Pass"), json!({ "checked_to": bound })),
                TotRefVerdict::Fail(f) => {
                    let certs = match f {
                        TotRefFailure::DualExtNonzero { index } => {
                            json!({"failure": "dual_ext_nonzero", "index": index})
                        }
                        TotRefFailure::BidualExtNonzero { index } => {
                            json!({"failure": "bidual_ext_nonzero", "index": index})
                        }
                        TotRefFailure::BidualityNotIso => json!({"failure": "biduality_not_iso"}),
                    };
                    (json!("Fail"), certs)
                }
            };
            Ok((verdict, certs, Some(eff)))
        }
        Command::Gcdim { module, dualizer, bound } => {
            let eff = bound.unwrap_or(flags.bound);
            let v = gc_dim(st.module(module), st.dualizer(dualizer), eff)?;
            let certs = match &v.ab_check {
                Some(ab) => json!({
                    "ab_check": format!("{} + {} = {}", ab.dimension, ab.module_depth, ab.ring_depth),
                }),
                None => json!({}),
            };
            Ok((bounded_json(v.value), certs, Some(v.bound)))
        }
        Command::Depth { module } => {
            Ok((json!(depth(st.module(module))?), json!({}), None))
        }
        Command::Grade { gens } => {
            let parsed: Result<Vec<Polynomial>, Error> =
                gens.iter().map(|g| st.ring.parse_poly(g)).collect();
            Ok((json!(grade(&st.ring, &parsed?)?), json!({}), None))
        }
        Command::Transpose { module, dualizer } => {
            let t = transpose(st.module(module), st.dualizer(dualizer))?;
            Ok((module_summary(&t, vars), json!({}), None))
        }
        Command::TransposeSes { module, dualizer } => {
            let (incl, proj) = syzygy_sequence(st.module(module))?;
            let six = transpose_ses(&incl, &proj, st.dualizer(dualizer))?;
            let verdict = if six.junctions.ok() { json!("Pass") } else { json!("Fail") };
            let sequence: Vec<Value> =
                six.modules.iter().map(|m| module_summary(m, vars)).collect();
            let exact: Vec<Value> = six
                .junctions
                .exact
                .iter()
                .map(|e| {
                    json!({
                        "composite_zero": e.composite_zero,
                        "kernel_in_image": e.kernel_in_image,
                    })
                })
                .collect();
            let certs = json!({
                "end_surjective": six.junctions.end_surjective,
                "exact": exact,
                "sequence": sequence,
                "start_injective": six.junctions.start_injective,
            });
            Ok((verdict, certs, None))
        }
        Command::Cosyzygy { module, dualizer } => {
            let c = cosyzygy(st.module(module), st.dualizer(dualizer))?;
            Ok((module_summary(&c, vars), json!({}), None))
        }
        Command::Ext { left, right, index } => {
            let eff = flags.bound.max(*index);
            let e = ext(st.module(left), st.module(right), *index, eff)?;
            Ok((module_summary(&e, vars), json!({}), Some(eff)))
        }
        Command::Tor { left, right, index } => {
            let t = tor(st.module(left), st.module(right), *index)?;
            Ok((module_summary(&t, vars), json!({}), None))
        }
        Command::Hom { left, right } => {
            let h = hom(st.module(left), st.module(right))?;
            Ok((module_summary(&h, vars), json!({}), None))
        }
        Command::Resolution { module, bound } => {
            let eff = bound.unwrap_or(flags.bound);
            let res = free_resolution(st.module(module), eff);
            let betti: Vec<usize> = (0..res.twists.len()).map(|i| res.betti(i)).collect();
            let verdict = json!({
                "betti": betti,
                "complete": res.complete,
                "twists": res.twists,
            });
            Ok((verdict, json!({}), Some(eff)))
        }
        Command::Hilbert { module, lo, hi } => {
            let dims = st.module(module).hilbert_window(*lo, *hi);
            Ok((json!(dims), json!({}), None))
        }
        Command::Dim { module } => {
            Ok((json!(st.module(module).krull_dim()), json!({}), None))
        }
        Command::Iso { left, right } => {
            let v = is_isomorphic(st.module(left), st.module(right), flags.trials, flags.seed)?;
            let (verdict, certs) = match v {
                IsoVerdict::Iso(w) => (
                    json!("Iso"),
                    json!({
                        "backward": matrix_strings(&w.backward.matrix, vars),
                        "forward": matrix_strings(&w.forward.matrix, vars),
                    }),
                ),
                IsoVerdict::NotIso(reason) => {
                    let label = match reason {
                        NotIsoReason::GeneratorDegrees => "generator_degrees",
                        NotIsoReason::RelationDegrees => "relation_degrees",
                        NotIsoReason::HilbertSeries => "hilbert_series",
                        NotIsoReason::Annihilator => "annihilator",
                    };
                    (json!("NotIso"), json!({ "reason": label }))
                }
                IsoVerdict::Unknown => (json!("Unknown"), json!({"trials": flags.trials})),
            };
            Ok((verdict, certs, None))
        }
        Command::Phi { set, kind, primes } => {
            let modules = st.modules_named(set);
            let prime_list = st.select_primes(primes)?;
            let table = grmod::phi(&modules, st.kind(kind), &prime_list, flags.bound)?;
            let labels: Vec<&str> = prime_list.iter().map(|p| p.label.as_str()).collect();
            Ok((
                table_json(&table),
                json!({ "relative_to_primes": labels }),
                Some(flags.bound),
            ))
        }
        Command::Lambda { module, gradefn, kind, primes } => {
            let table = &st.gradefns[gradefn];
            let prime_list = st.select_primes(primes)?;
            let v = lambda_member(st.module(module), table, st.kind(kind), &prime_list, flags.bound)?;
            let labels: Vec<&str> = prime_list.iter().map(|p| p.label.as_str()).collect();
            let (verdict, mut certs) = match v {
                LambdaVerdict::Yes => (json!("Yes"), serde_json::Map::new()),
                LambdaVerdict::No { witness } => {
                    let mut m = serde_json::Map::new();
                    m.insert("witness".into(), json!(witness));
                    (json!("No"), m)
                }
            };
            certs.insert("relative_to_primes".into(), json!(labels));
            Ok((verdict, Value::Object(certs), Some(flags.bound)))
        }
        Command::Gcheck { gradefn, primes } => {
            let table = &st.gradefns[gradefn];
            let prime_list = st.select_primes(primes)?;
            let v = is_grade_consistent(&st.ring, table, &prime_list)?;
            let labels: Vec<&str> = prime_list.iter().map(|p| p.label.as_str()).collect();
            let (verdict, mut certs) = match v {
                GradeConsistency::Yes => (json!("Yes"), serde_json::Map::new()),
                GradeConsistency::No(violation) => {
                    let mut m = serde_json::Map::new();
                    match violation {
                        GradeViolation::GradeBound { label, value, grade } => {
                            m.insert("violation".into(), json!("grade_bound"));
                            m.insert("prime".into(), json!(label));
                            m.insert("value".into(), bounded_json(value));
                            m.insert("grade".into(), json!(grade));
                        }
                        GradeViolation::Monotonicity { smaller, larger } => {
                            m.insert("violation".into(), json!("monotonicity"));
                            m.insert("smaller".into(), json!(smaller));
                            m.insert("larger".into(), json!(larger));
                        }
                    }
                    (json!("No"), m)
                }
            };
            certs.insert("relative_to_primes".into(), json!(labels));
            Ok((verdict, Value::Object(certs), None))
        }
        Command::Witness { target, base, nodes, root } => {
            let base_modules = st.modules_named(base);
            let mut built: Vec<WitnessNode> = Vec::with_capacity(nodes.len());
            for n in nodes {
                built.push(match n {
                    NodeSyntax::Gen { index } => WitnessNode::Generator { index: *index },
                    NodeSyntax::Free { twists } => WitnessNode::Free { twists: twists.clone() },
                    NodeSyntax::Syz { child } => WitnessNode::Syzygy { child: *child },
                    NodeSyntax::Sum { child, summand, complement } => WitnessNode::Summand {
                        child: *child,
                        summand: st.module(summand).clone(),
                        complement: st.module(complement).clone(),
                    },
                    NodeSyntax::Ext { left, right, middle, incl, proj } => {
                        WitnessNode::Extension {
                            left: *left,
                            right: *right,
                            middle: st.module(middle).clone(),
                            incl: grid_to_matrix(&st.ring, incl)?,
                            proj: grid_to_matrix(&st.ring, proj)?,
                        }
                    }
                });
            }
            let w = ResolvingWitness { nodes: built, root: *root };
            let v = check_resolving_witness(&w, &base_modules, st.module(target), flags.trials, flags.seed)?;
            let (verdict, certs) = match v {
                WitnessVerdict::Valid => (json!("Valid"), json!({})),
                WitnessVerdict::Invalid { node, reason } => {
                    (json!("Invalid"), json!({"node": node, "reason": reason}))
                }
            };
            Ok((verdict, certs, None))
        }
        Command::Wwords { dualizer, length } => {
            let words = grmod::w_words(st.dualizer(dualizer), *length)?;
            let summaries: Vec<Value> = words.iter().map(|w| module_summary(w, vars)).collect();
            Ok((json!(summaries), json!({}), None))
        }
        Command::Extvdim { module, family, bound } => {
            let eff = bound.unwrap_or(flags.bound);
            let fam = st.modules_named(family);
            let v = ext_vanishing_dim(st.module(module), &fam, eff)?;
            Ok((bounded_json(v.value), json!({}), Some(v.bound)))
        }
    }
}

fn inputs_json(cmd: &Command) -> Value {
    match cmd {
        Command::Semidual { module, .. } => json!({ "module": module }),
        Command::Totref { module, dualizer, .. } | Command::Gcdim { module, dualizer, .. } => {
            json!({"dualizer": dualizer, "module": module})
        }
        Command::Depth { module } | Command::Dim { module } => json!({ "module": module }),
        Command::Grade { gens } => json!({ "ideal": gens }),
        Command::Transpose { module, dualizer }
        | Command::TransposeSes { module, dualizer }
        | Command::Cosyzygy { module, dualizer } => {
            json!({"dualizer": dualizer, "module": module})
        }
        Command::Ext { left, right, index } | Command::Tor { left, right, index } => {
            json!({"index": index, "left": left, "right": right})
        }
        Command::Hom { left, right } | Command::Iso { left, right } => {
            json!({"left": left, "right": right})
        }
        Command::Resolution { module, .. } => json!({ "module": module }),
        Command::Hilbert { module, lo, hi } => {
            json!({"from": lo, "module": module, "to": hi})
        }
        Command::Phi { set, kind, primes } => {
            json!({"kind": kind_json(kind), "primes": primes_json(primes), "set": set})
        }
        Command::Lambda { module, gradefn, kind, primes } => json!({
            "gradefn": gradefn,
            "kind": kind_json(kind),
            "module": module,
            "primes": primes_json(primes),
        }),
        Command::Gcheck { gradefn, primes } => {
            json!({"gradefn": gradefn, "primes": primes_json(primes)})
        }
        Command::Witness { target, base, nodes, root } => json!({
            "base": base,
            "nodes": nodes.len(),
            "root": root,
            "target": target,
        }),
        Command::Wwords { dualizer, length } => {
            json!({"dualizer": dualizer, "length": length})
        }
        Command::Extvdim { module, family, .. } => {
            json!({"family": family, "module": module})
        }
    }
}

fn emit(
    out: &mut String,
    flags: &Flags,
    headline: &str,
    command: &str,
    inputs: Value,
    verdict: Value,
    certificates: Value,
    bound: Option<usize>,
) {
    match flags.format {
        Format::Json => {
            let obj = json!({
                "bound": bound,
                "certificates": certificates,
                "command": command,
                "inputs": inputs,
                "seed": flags.seed,
                "verdict": verdict,
            });
            out.push_str(&obj.to_string());
            out.push('\n');
        }
        Format::Text => {
            let shown = match &verdict {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(headline);
            out.push_str(" -> ");
            out.push_str(&shown);
            let skip = certificates.as_object().is_some_and(|m| m.is_empty());
            if !skip {
                out.push_str(" | ");
                out.push_str(&certificates.to_string());
            }
            out.push('\n');
        }
    }
}

fn decl_descriptor(d: &Decl) -> (&'static str, &str) {
    match d {
        Decl::Ring { name, .. } => ("ring", name),
        Decl::Module { name, .. } => ("module", name),
        Decl::Dualizer { name, .. } => ("dualizer", name),
        Decl::Prime { name, .. } => ("prime", name),
        Decl::GradeFn { name, .. } => ("gradefn", name),
    }
}

/// Execute a parsed session; returns the full report text and the exit
/// code (0 all commands succeeded, 1 any command or declaration failed).
/// A failed declaration poisons everything after it, so it halts the run.
pub fn run(session: &Session, flags: &Flags) -> (String, i32) {
    let mut out = String::new();
    let mut exit = 0;
    let mut st: Option<State> = None;
    for item in &session.items {
        match item {
            Item::Decl(d) => {
                if let Err(e) = apply_decl(&mut st, d, flags) {
                    let (kind, name) = decl_descriptor(d);
                    emit(
                        &mut out,
                        flags,
                        &format!("declare {kind} {name}"),
                        "declare",
                        json!({"kind": kind, "name": name}),
                        json!("Error"),
                        json!({"error": e.to_string()}),
                        None,
                    );
                    return (out, 1);
                }
            }
            Item::Command(c) => {
                let state = st.as_ref().expect("parser guarantees a ring before commands");
                let headline = print_command(c);
                let word = headline.split_whitespace().next().unwrap_or("").to_string();
                let (verdict, certs, bound) = match exec(state, flags, c) {
                    Ok(outcome) => outcome,
                    Err(e) => {
                        exit = 1;
                        (json!("Error"), json!({"error": e.to_string()}), None)
                    }
                };
                emit(&mut out, flags, &headline, &word, inputs_json(c), verdict, certs, bound);
            }
        }
    }
    (out, exit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::parse_session;

    const FLAGS: Flags = Flags { bound: 20, seed: 0, trials: 64, format: Format::Json };

    fn run_script(text: &str, flags: &Flags) -> (Vec<Value>, i32) {
        let session = parse_session(text).unwrap();
        let (out, code) = run(&session, flags);
        let lines = out
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        (lines, code)
    }

    #[test]
    fn gcdim_of_a_maximal_cohen_macaulay_module_reports_the_depth_identity() {
        let text = "\
ring R = poly(101, [x, y], grevlex) / ideal(x*y)
module M = coker [[x]]
module F = coker [[0]]
dualizer C = F
gcdim M dualizer C bound 20
";
        let (lines, code) = run_script(text, &FLAGS);
        assert_eq!(code, 0);
        assert_eq!(lines.len(), 1);
        let r = &lines[0];
        assert_eq!(r["verdict"], json!(0));
        assert_eq!(r["bound"], json!(20));
        assert_eq!(r["certificates"]["ab_check"], json!("0 + 1 = 1"));
        assert_eq!(r["seed"], json!(0));
        assert_eq!(r["command"], json!("gcdim"));
    }

    #[test]
    fn semidual_failure_carries_the_ext_witness() {
        let text = "\
ring R = poly(101, [x], grevlex)
module T = coker [[x]]
semidual T bound 20
";
        let (lines, code) = run_script(text, &FLAGS);
        assert_eq!(code, 0);
        let r = &lines[0];
        assert_eq!(r["verdict"], json!("Fail"));
        assert_eq!(r["certificates"]["failure"], json!("ext_nonzero"));
        assert_eq!(r["certificates"]["index"], json!(1));
        let witness = &r["certificates"]["witness"];
        assert_eq!(witness["rank"], json!(1));
        assert_eq!(witness["relations"], json!(["(x)*e0"]));
    }

    #[test]
    fn phi_table_lists_local_projective_dimensions_per_prime() {
        let text = "\
ring R = poly(101, [x, y], grevlex)
module M = coker [[x]]
prime px = ideal(x)
prime py = ideal(y)
prime m = ideal(x, y) in px, py
phi set {M} kind projective primes all
";
        let (lines, code) = run_script(text, &FLAGS);
        assert_eq!(code, 0);
        let r = &lines[0];
        assert_eq!(r["verdict"], json!({"m": 1, "px": 1, "py": 0}));
        assert_eq!(
            r["certificates"]["relative_to_primes"],
            json!(["px", "py", "m"])
        );
    }

    #[test]
    fn command_errors_keep_the_stream_alive_and_set_the_exit_code() {
        let text = "\
ring R = poly(101, [x], grevlex)
module Z = coker [[1]]
depth Z
depth Z
";
        let (lines, code) = run_script(text, &FLAGS);
        assert_eq!(code, 1);
        assert_eq!(lines.len(), 2);
        for r in &lines {
            assert_eq!(r["verdict"], json!("Error"));
            assert!(r["certificates"]["error"].is_string());
        }
    }

    #[test]
    fn declaration_failure_halts_the_session() {
        let text = "\
ring R = poly(101, [x], grevlex)
module B = coker [[x + 1]]
depth B
";
        let (lines, code) = run_script(text, &FLAGS);
        assert_eq!(code, 1);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0]["command"], json!("declare"));
        assert_eq!(lines[0]["verdict"], json!("Error"));
        assert_eq!(lines[0]["inputs"]["name"], json!("B"));
    }

    #[test]
    fn identical_runs_produce_identical_bytes() {
        let text = "\
ring R = poly(101, [x, y], grevlex) / ideal(x*y)
module k = coker [[x, y]]
module F = coker [[0]]
dualizer C = F
transpose k dualizer C
iso k k
resolution k bound 4
";
        let session = parse_session(text).unwrap();
        let (a, ca) = run(&session, &FLAGS);
        let (b, cb) = run(&session, &FLAGS);
        assert_eq!(a, b);
        assert_eq!(ca, cb);
        assert_eq!(ca, 0);
    }

    #[test]
    fn text_format_renders_one_line_per_command() {
        let text = "\
ring R = poly(101, [x], grevlex)
module k = coker [[x]]
depth k
hilbert k from 0 to 3
";
        let flags = Flags { format: Format::Text, ..FLAGS };
        let session = parse_session(text).unwrap();
        let (out, code) = run(&session, &flags);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "depth k -> 0");
        assert_eq!(lines[1], "hilbert k from 0 to 3 -> [1,0,0,0]");
    }

    #[test]
    fn witness_command_accepts_a_syzygy_chain_and_flags_a_bad_root() {
        let text = "\
ring R = poly(101, [x, y], grevlex)
module k = coker [[x, y]]
module F = coker [[0]]
witness target k base {k} nodes [gen 0] root 0
witness target F base {k} nodes [gen 0] root 0
";
        let (lines, code) = run_script(text, &FLAGS);
        assert_eq!(code, 0);
        assert_eq!(lines[0]["verdict"], json!("Valid"));
        assert_eq!(lines[1]["verdict"], json!("Invalid"));
        assert_eq!(lines[1]["certificates"]["node"], json!(0));
    }
}
