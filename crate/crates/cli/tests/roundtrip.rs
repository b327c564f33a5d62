//! Print/parse round trip over generated session ASTs: every declaration
//! shape, optional clause, and command form must survive
//! `parse_session(print_session(s)) == s`.

use grmod_cli::session::{
    parse_session, print_session, Command, Decl, GradeValue, Item, KindArg, NodeSyntax,
    PrimesArg, Session,
};
use proptest::prelude::*;
use proptest::strategy::Union;

const POLYS: &[&str] = &["x", "y", "x*y", "x^2 + 3*y^2", "2*x", "x + y", "0"];
const ORDERS: &[&str] = &["grevlex", "grlex", "lex"];

fn poly() -> impl Strategy<Value = String> {
    prop::sample::select(POLYS).prop_map(str::to_string)
}

fn nonzero_poly() -> impl Strategy<Value = String> {
    prop::sample::select(&POLYS[..POLYS.len() - 1]).prop_map(str::to_string)
}

/// Rectangular grid of polynomial text, possibly with zero columns.
fn grid() -> impl Strategy<Value = Vec<Vec<String>>> {
    (1usize..4, 0usize..3).prop_flat_map(|(nr, nc)| {
        prop::collection::vec(poly(), nr * nc).prop_map(move |entries| {
            if nc == 0 {
                vec![Vec::new(); nr]
            } else {
                entries.chunks(nc).map(<[String]>::to_vec).collect()
            }
        })
    })
}

fn module_decl() -> impl Strategy<Value = (Vec<Vec<String>>, Option<Vec<i64>>)> {
    grid().prop_flat_map(|rows| {
        let n = rows.len();
        (Just(rows), prop::option::of(prop::collection::vec(-3i64..4, n)))
    })
}

fn opt_bound() -> impl Strategy<Value = Option<usize>> {
    prop::option::of(1usize..25)
}

fn module_name(nmods: usize) -> impl Strategy<Value = String> {
    (0..nmods).prop_map(|i| format!("m{i}"))
}

fn primes_arg(nprimes: usize) -> BoxedStrategy<PrimesArg> {
    if nprimes == 0 {
        Just(PrimesArg::All).boxed()
    } else {
        prop_oneof![
            Just(PrimesArg::All),
            prop::collection::vec(0..nprimes, 1..=nprimes).prop_map(|mut ids| {
                ids.sort_unstable();
                ids.dedup();
                PrimesArg::Named(ids.into_iter().map(|i| format!("p{i}")).collect())
            }),
        ]
        .boxed()
    }
}

fn kind_arg(has_dualizer: bool) -> BoxedStrategy<KindArg> {
    if has_dualizer {
        prop_oneof![Just(KindArg::Projective), Just(KindArg::Dualizer("d0".into()))].boxed()
    } else {
        Just(KindArg::Projective).boxed()
    }
}

fn witness_node(nmods: usize) -> impl Strategy<Value = NodeSyntax> {
    prop_oneof![
        (0usize..4).prop_map(|index| NodeSyntax::Gen { index }),
        prop::collection::vec(-2i64..3, 0..3).prop_map(|twists| NodeSyntax::Free { twists }),
        (0usize..4).prop_map(|child| NodeSyntax::Syz { child }),
        (0usize..4, module_name(nmods), module_name(nmods))
            .prop_map(|(child, summand, complement)| NodeSyntax::Sum {
                child,
                summand,
                complement
            }),
        (0usize..3, 0usize..3, module_name(nmods), grid(), grid()).prop_map(
            |(left, right, middle, incl, proj)| NodeSyntax::Ext {
                left,
                right,
                middle,
                incl,
                proj
            }
        ),
    ]
}

fn command(nmods: usize, has_dualizer: bool, nprimes: usize, has_gradefn: bool) -> BoxedStrategy<Command> {
    let m = module_name(nmods);
    let mut arms: Vec<BoxedStrategy<Command>> = vec![
        (module_name(nmods), opt_bound())
            .prop_map(|(module, bound)| Command::Semidual { module, bound })
            .boxed(),
        module_name(nmods).prop_map(|module| Command::Depth { module }).boxed(),
        module_name(nmods).prop_map(|module| Command::Dim { module }).boxed(),
        prop::collection::vec(nonzero_poly(), 1..3)
            .prop_map(|gens| Command::Grade { gens })
            .boxed(),
        (module_name(nmods), module_name(nmods), 0usize..4)
            .prop_map(|(left, right, index)| Command::Ext { left, right, index })
            .boxed(),
        (module_name(nmods), module_name(nmods), 0usize..4)
            .prop_map(|(left, right, index)| Command::Tor { left, right, index })
            .boxed(),
        (module_name(nmods), module_name(nmods))
            .prop_map(|(left, right)| Command::Hom { left, right })
            .boxed(),
        (module_name(nmods), opt_bound())
            .prop_map(|(module, bound)| Command::Resolution { module, bound })
            .boxed(),
        (module_name(nmods), -4i64..1, 0i64..6)
            .prop_map(|(module, lo, hi)| Command::Hilbert { module, lo, hi })
            .boxed(),
        (module_name(nmods), module_name(nmods))
            .prop_map(|(left, right)| Command::Iso { left, right })
            .boxed(),
        (
            prop::collection::vec(m, 1..3),
            kind_arg(has_dualizer),
            primes_arg(nprimes),
        )
            .prop_map(|(mut set, kind, primes)| {
                set.sort();
                set.dedup();
                Command::Phi { set, kind, primes }
            })
            .boxed(),
        (
            module_name(nmods),
            prop::collection::vec(module_name(nmods), 1..3),
            (0usize..4, module_name(nmods)).prop_flat_map(|(extra, _)| {
                prop::collection::vec(witness_node(nmods), extra..extra + 1)
            }),
            0usize..4,
        )
            .prop_map(|(target, mut base, extra_nodes, root)| {
                base.sort();
                base.dedup();
                let mut nodes = vec![NodeSyntax::Gen { index: 0 }];
                nodes.extend(extra_nodes);
                Command::Witness { target, base, nodes, root }
            })
            .boxed(),
        (module_name(nmods), prop::collection::vec(module_name(nmods), 1..3), opt_bound())
            .prop_map(|(module, mut family, bound)| {
                family.sort();
                family.dedup();
                Command::Extvdim { module, family, bound }
            })
            .boxed(),
    ];
    if has_dualizer {
        let d = || Just("d0".to_string());
        arms.push(
            (module_name(nmods), d(), opt_bound())
                .prop_map(|(module, dualizer, bound)| Command::Totref { module, dualizer, bound })
                .boxed(),
        );
        arms.push(
            (module_name(nmods), d(), opt_bound())
                .prop_map(|(module, dualizer, bound)| Command::Gcdim { module, dualizer, bound })
                .boxed(),
        );
        arms.push(
            (module_name(nmods), d())
                .prop_map(|(module, dualizer)| Command::Transpose { module, dualizer })
                .boxed(),
        );
        arms.push(
            (module_name(nmods), d())
                .prop_map(|(module, dualizer)| Command::TransposeSes { module, dualizer })
                .boxed(),
        );
        arms.push(
            (module_name(nmods), d())
                .prop_map(|(module, dualizer)| Command::Cosyzygy { module, dualizer })
                .boxed(),
        );
        arms.push(
            (d(), 1usize..4)
                .prop_map(|(dualizer, length)| Command::Wwords { dualizer, length })
                .boxed(),
        );
    }
    if has_gradefn {
        arms.push(
            (module_name(nmods), kind_arg(has_dualizer), primes_arg(nprimes))
                .prop_map(|(module, kind, primes)| Command::Lambda {
                    module,
                    gradefn: "g0".into(),
                    kind,
                    primes,
                })
                .boxed(),
        );
        arms.push(
            primes_arg(nprimes)
                .prop_map(|primes| Command::Gcheck { gradefn: "g0".into(), primes })
                .boxed(),
        );
    }
    Union::new(arms).boxed()
}

fn session() -> impl Strategy<Value = Session> {
    (
        prop::sample::select(ORDERS),
        prop::collection::vec(nonzero_poly(), 0..3),
        1usize..4,
        any::<bool>(),
        0usize..3,
        any::<bool>(),
    )
        .prop_flat_map(|(order, ideal, nmods, has_dualizer, nprimes, has_gradefn)| {
            let modules = prop::collection::vec(module_decl(), nmods..nmods + 1);
            let primes = prop::collection::vec(
                (prop::collection::vec(nonzero_poly(), 1..3), any::<bool>()),
                nprimes..nprimes + 1,
            );
            let gradefn_values =
                prop::collection::vec((0usize..4, any::<bool>()), nprimes..nprimes + 1);
            let commands =
                prop::collection::vec(command(nmods, has_dualizer, nprimes, has_gradefn), 0..5);
            (Just(order), Just(ideal), modules, Just(has_dualizer), primes, gradefn_values, Just(has_gradefn), commands)
        })
        .prop_map(|(order, ideal, modules, has_dualizer, primes, gradefn_values, has_gradefn, commands)| {
            let mut items = vec![Item::Decl(Decl::Ring {
                name: "R".into(),
                p: 101,
                vars: vec!["x".into(), "y".into()],
                order: order.to_string(),
                ideal,
            })];
            for (i, (rows, degrees)) in modules.into_iter().enumerate() {
                items.push(Item::Decl(Decl::Module { name: format!("m{i}"), rows, degrees }));
            }
            if has_dualizer {
                items.push(Item::Decl(Decl::Dualizer { name: "d0".into(), module: "m0".into() }));
            }
            for (i, (gens, include_prev)) in primes.into_iter().enumerate() {
                let inclusions = if i > 0 && include_prev {
                    vec![format!("p{}", i - 1)]
                } else {
                    Vec::new()
                };
                items.push(Item::Decl(Decl::Prime { name: format!("p{i}"), gens, inclusions }));
            }
            if has_gradefn {
                let entries = gradefn_values
                    .into_iter()
                    .enumerate()
                    .map(|(i, (n, inf))| {
                        let v = if inf { GradeValue::Infinity } else { GradeValue::Finite(n) };
                        (format!("p{i}"), v)
                    })
                    .collect();
                items.push(Item::Decl(Decl::GradeFn { name: "g0".into(), entries }));
            }
            items.extend(commands.into_iter().map(Item::Command));
            Session { items }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_the_identity(s in session()) {
        let printed = print_session(&s);
        let reparsed = parse_session(&printed);
        prop_assert_eq!(reparsed.as_ref(), Ok(&s), "printed:\n{}", printed);
    }
}
