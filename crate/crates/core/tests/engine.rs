use std::collections::BTreeMap;

use qpainleve::catalog::{Catalog, Label, ParamMap};
use qpainleve::coeff::{ParamRat, Symbol};
use qpainleve::engine::*;
use qpainleve::expr::{parse, parse_scalar, parse_weyl};
use qpainleve::weyl::{classical_limit, Layout, Slot, Vars, WeylExpr};

fn cat() -> &'static Catalog {
    Catalog::builtin()
}

fn in_chart(l: Label, i: usize, src: &str) -> WeylExpr {
    let c = cat().get_chart(l, i).unwrap();
    parse_weyl(src, &c.vars, c.layout).unwrap()
}

#[test]
fn ii_chart0_field_and_hamiltonian() {
    let sys = cat().get_system(Label::II).unwrap();
    let charts = cat().get_charts(Label::II).unwrap();
    let (vx, vy) = transform_flow(sys, &charts[0], charts).unwrap();
    assert_eq!(
        vx,
        in_chart(Label::II, 0, "x0^4*y0 + (b - h)*x0^3 + t/2*x0^2 + 1")
    );
    assert_eq!(
        vy,
        in_chart(
            Label::II,
            0,
            "3*(h - b)*x0^2*y0 - b*(b - h)*x0 - t/2*b - 2*x0^3*y0^2 - t*x0*y0"
        )
    );
    let h = reconstruct_hamiltonian(&vx, &vy).unwrap();
    let golden = &cat().get_golden(Label::II, 0).unwrap().hamiltonian;
    assert_eq!(h, golden.to_layout(h.layout()).unwrap());
}

#[test]
fn identity_chart_is_canonical() {
    let mut chart = cat().get_chart(Label::II, 0).unwrap().clone();
    let vars = Vars::new("q", "p");
    let gen = |s| WeylExpr::generator(&vars, Layout::POLY, s);
    chart.forward = [gen(Slot::First), gen(Slot::Second)];
    chart.backward = chart.forward.clone();
    assert!(check_canonical(&chart).passed());
}

#[test]
fn corrupted_chart_fails_with_witness() {
    let mut chart = cat().get_chart(Label::II, 0).unwrap().clone();
    let (vars, layout) = (chart.backward[1].vars().clone(), chart.backward[1].layout());
    chart.backward[1] = parse_weyl("-b*q - p*q^2", &vars, layout).unwrap();
    let r = check_canonical(&chart);
    assert_eq!(r.status, Status::Fail);
    assert!(!r.witnesses.is_empty());
    assert!(r.witnesses.len() <= MAX_WITNESSES);
}

#[test]
fn every_catalog_chart_is_canonical() {
    for l in Label::ALL {
        for c in cat().get_charts(l).unwrap() {
            let r = check_canonical(c);
            assert!(r.passed(), "{r}");
        }
    }
}

#[test]
fn printed_vi_chart4_is_not_canonical() {
    let c = cat().get_chart(Label::VI, 4).unwrap();
    let r = check_printed_chart(c).expect("printed form kept");
    assert_eq!(r.status, Status::Fail);
    assert!(cat()
        .get_charts(Label::II)
        .unwrap()
        .iter()
        .all(|c| check_printed_chart(c).is_none()));
}

fn polynomial_report(l: Label, chart: usize, src: &str) -> VerificationReport {
    let sys = cat().get_system(l).unwrap();
    let charts = cat().get_charts(l).unwrap();
    let h = parse_weyl(src, &Vars::new("q", "p"), Layout::POLY).unwrap();
    let v = transform_flow_with(sys, &charts[chart], charts, &h, FlowOptions::VERIFY).unwrap();
    check_polynomial(l, src, &v)
}

#[test]
fn non_painleve_hamiltonian_has_poles() {
    // p = -x1^2*y1 - a*x1 + 2/x1^2 + t on chart 1.
    let r = polynomial_report(Label::II, 1, "p^3");
    assert_eq!(r.status, Status::Fail);
    assert!(!r.witnesses.is_empty() && r.witnesses.iter().all(|w| w.exponents[0] < 0));
    let r = polynomial_report(Label::II, 0, "q^3");
    assert_eq!(r.status, Status::Fail);
}

#[test]
fn powers_of_p_are_regular_on_chart0() {
    // p = -x0^2*y0 - b*x0 there.
    assert!(polynomial_report(Label::II, 0, "p^3").passed());
}

#[test]
fn zero_field_is_polynomial() {
    let z = in_chart(Label::II, 0, "0");
    assert!(check_polynomial(Label::II, "zero", &(z.clone(), z)).passed());
}

#[test]
fn reconstruct_constant_field() {
    let vars = Vars::new("x", "y");
    let one = WeylExpr::one(&vars, Layout::POLY);
    let zero = WeylExpr::zero(&vars, Layout::POLY);
    let h = reconstruct_hamiltonian(&one, &zero).unwrap();
    assert_eq!(h, WeylExpr::generator(&vars, Layout::POLY, Slot::Second));
}

#[test]
fn reconstruct_rejects_non_exact_field() {
    let vars = Vars::new("x", "y");
    let x = WeylExpr::generator(&vars, Layout::POLY, Slot::First);
    assert!(matches!(
        reconstruct_hamiltonian(&x, &x),
        Err(EngineError::NonExact(_))
    ));
}

#[test]
fn wrong_golden_fails_with_witnesses() {
    let sys = cat().get_system(Label::II).unwrap();
    let charts = cat().get_charts(Label::II).unwrap();
    let r = verify_chart_against(
        sys,
        &charts[0],
        charts,
        cat().get_golden(Label::II, 1).unwrap(),
    );
    assert_eq!(r.status, Status::Fail);
    assert!(r.witnesses.iter().any(|w| w.residual == "H' - golden"));
}

#[test]
fn chart_reports_carry_derived_objects() {
    let r = run_task(
        cat(),
        &Task {
            kind: TaskKind::Chart,
            system: Label::III,
            target: "1".into(),
        },
    );
    assert!(r.passed(), "{r}");
    assert_eq!(r.derived["central_difference"], "0");
    for key in ["V_x", "V_y", "H'"] {
        assert!(r.derived.contains_key(key));
    }
}

#[test]
fn chart_suite_matches_known_outcomes() {
    let failing = [(Label::VI, "3"), (Label::VI, "4")];
    for l in Label::ALL {
        for t in task_list(cat(), TaskKind::Chart, &[l]).unwrap() {
            let r = run_task(cat(), &t);
            let expect_fail = failing.contains(&(l, t.target.as_str()));
            assert_eq!(r.passed(), !expect_fail, "{r}");
        }
    }
}

#[test]
fn vi_chart4_differs_from_print_in_one_coefficient() {
    let r = run_task(
        cat(),
        &Task {
            kind: TaskKind::Chart,
            system: Label::VI,
            target: "4".into(),
        },
    );
    assert_eq!(r.witnesses.len(), 1, "{r}");
    assert_eq!(r.witnesses[0].exponents, [0, 1]);
}

#[test]
fn vi_chart3_has_time_pole() {
    let r = run_task(
        cat(),
        &Task {
            kind: TaskKind::Chart,
            system: Label::VI,
            target: "3".into(),
        },
    );
    assert_eq!(r.status, Status::Fail);
    assert!(r
        .witnesses
        .iter()
        .any(|w| w.residual == "V_x poles" && w.exponents == [0, -2]));
}

#[test]
fn classical_limit_commutes_with_chart_pipeline() {
    for l in Label::ALL {
        let sys = cat().get_system(l).unwrap();
        let charts = cat().get_charts(l).unwrap();
        for c in charts {
            let (vx, vy) = transform_flow(sys, c, charts).unwrap();
            let (cx, cy) = classical_transform_flow(sys, c, charts).unwrap();
            assert_eq!(classical_limit(&vx).unwrap(), cx, "{l} chart {}", c.index);
            assert_eq!(classical_limit(&vy).unwrap(), cy, "{l} chart {}", c.index);
            if let Ok(h) = reconstruct_hamiltonian(&vx, &vy) {
                let ch = classical_chart_hamiltonian(sys, c, charts).unwrap();
                assert_eq!(classical_limit(&h).unwrap(), ch, "{l} chart {}", c.index);
            }
        }
    }
}

fn nagoya_report(l: Label, map: &str) -> VerificationReport {
    run_task(
        cat(),
        &Task {
            kind: TaskKind::Nagoya,
            system: l,
            target: map.into(),
        },
    )
}

#[test]
fn nagoya_stated_maps() {
    for (l, map) in [
        (Label::III, "stated"),
        (Label::V, "stated"),
        (Label::VI, "first"),
        (Label::VI, "second"),
    ] {
        let r = nagoya_report(l, map);
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn nagoya_ii_emits_corrected_shift() {
    let r = nagoya_report(Label::II, "stated");
    assert_eq!(r.status, Status::Fail);
    assert_eq!(r.derived["difference"], "-2*h*q");
    assert_eq!(r.derived["corrected_map"], "alpha1 = 1/2*b + 1/2*h");

    let n = cat().get_nagoya(Label::II).unwrap();
    let sys = cat().get_system(Label::II).unwrap();
    let assign = BTreeMap::from([(Symbol::alpha(1), parse_scalar("(b + h)/2").unwrap())]);
    let d = nagoya_difference(sys, n, &assign).unwrap();
    assert!(d.is_central(), "{d}");
}

#[test]
fn nagoya_iv_has_no_centralizing_shift() {
    let r = nagoya_report(Label::IV, "stated");
    assert_eq!(r.status, Status::Fail);
    assert!(!r.derived.contains_key("corrected_map"));
    assert!(r.notes.iter().any(|n| n.contains("no h-shift")));
}

#[test]
fn nagoya_against_itself_is_zero() {
    let sys = cat().get_system(Label::IV).unwrap();
    let mut n = cat().get_nagoya(Label::IV).unwrap().clone();
    n.hamiltonian = sys.hamiltonian.clone();
    n.maps = vec![ParamMap {
        name: "trivial".into(),
        assign: BTreeMap::new(),
    }];
    assert!(nagoya_difference(sys, &n, &BTreeMap::new())
        .unwrap()
        .is_zero());
}

#[test]
fn straightening_brackets_by_hand() {
    // [p - 2q^2 - t, -q] = -[p, q] = h.
    let vars = Vars::new("q", "p");
    let u = parse_weyl("p - 2*q^2 - t", &vars, Layout::POLY).unwrap();
    let v = parse_weyl("-q", &vars, Layout::POLY).unwrap();
    assert_eq!(
        u.commutator(&v).unwrap(),
        WeylExpr::scalar(&vars, Layout::POLY, ParamRat::var(Symbol::H))
    );
    for l in Label::ALL {
        for g in cat().get_symmetries(l).unwrap() {
            let r = run_task(
                cat(),
                &Task {
                    kind: TaskKind::Symmetry,
                    system: l,
                    target: g.name.clone(),
                },
            );
            assert!(
                !r.witnesses
                    .iter()
                    .any(|w| w.residual.starts_with("straightening")),
                "{r}"
            );
        }
    }
}

fn compose(map: &BTreeMap<Symbol, ParamRat>, v: &ParamRat) -> ParamRat {
    v.specialize(map).unwrap()
}

#[test]
fn alpha_maps_are_involutions() {
    for l in Label::ALL {
        for g in cat().get_symmetries(l).unwrap() {
            for (s, v) in &g.alpha_map {
                assert_eq!(
                    compose(&g.alpha_map, v),
                    ParamRat::var(*s),
                    "{l} {} on {s}",
                    g.name
                );
            }
            let t = BTreeMap::from([(Symbol::T, g.t_map.clone())]);
            assert_eq!(compose(&t, &g.t_map), ParamRat::var(Symbol::T));
        }
    }
}

fn symmetry(l: Label, name: &str) -> VerificationReport {
    run_task(
        cat(),
        &Task {
            kind: TaskKind::Symmetry,
            system: l,
            target: name.into(),
        },
    )
}

#[test]
fn identity_variable_map_has_trivial_bracket() {
    let r = symmetry(Label::VI, "s1");
    assert!(r.passed(), "{r}");
    assert_eq!(r.derived["Q"], "q");
    assert_eq!(r.derived["P"], "p");
}

#[test]
fn time_reversal_uses_unit_factor_for_iii() {
    let r = symmetry(Label::III, "s1");
    assert!(r.passed(), "{r}");
    assert_eq!(r.derived["time_factor"], "1");
    assert!(!r.notes.is_empty());
}

#[test]
fn missing_straightening_is_unsupported() {
    let sys = cat().get_system(Label::IV).unwrap();
    let n = cat().get_nagoya(Label::IV).unwrap();
    let mut g = cat().get_symmetry(Label::IV, "s0").unwrap().clone();
    g.straighten = None;
    let r = verify_symmetry(sys, n, &g);
    assert_eq!(r.status, Status::Unsupported, "{r}");
}

#[test]
fn unparsable_inverse_is_never_a_pass() {
    let sys = cat().get_system(Label::II).unwrap();
    let n = cat().get_nagoya(Label::II).unwrap();
    let mut g = cat().get_symmetry(Label::II, "s1").unwrap().clone();
    g.q = parse("q - alpha1/(p + q)").unwrap();
    let r = verify_symmetry(sys, n, &g);
    assert_ne!(r.status, Status::Pass);
}

#[test]
fn symmetry_suite_matches_known_outcomes() {
    let passing = [
        (Label::II, "s1"),
        (Label::III, "s0"),
        (Label::III, "s1"),
        (Label::III, "s2"),
        (Label::VI, "s1"),
    ];
    for l in Label::ALL {
        for t in task_list(cat(), TaskKind::Symmetry, &[l]).unwrap() {
            let r = run_task(cat(), &t);
            assert_ne!(r.status, Status::Unsupported, "{r}");
            assert_eq!(r.passed(), passing.contains(&(l, t.target.as_str())), "{r}");
        }
    }
}

#[test]
fn task_ids_are_unique_and_sorted_by_catalog() {
    let mut ids = Vec::new();
    for kind in [
        TaskKind::Canonical,
        TaskKind::Chart,
        TaskKind::Nagoya,
        TaskKind::Symmetry,
    ] {
        ids.extend(
            task_list(cat(), kind, &Label::ALL)
                .unwrap()
                .iter()
                .map(Task::id),
        );
    }
    let n = ids.len();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), n);
    assert_eq!(
        task_list(cat(), TaskKind::Chart, &Label::ALL)
            .unwrap()
            .len(),
        17
    );
}

#[test]
fn classical_limit_reports_pass_for_every_chart() {
    let tasks = task_list(cat(), TaskKind::Classical, &Label::ALL).unwrap();
    assert_eq!(tasks.len(), 17);
    for t in &tasks {
        let r = run_task(cat(), t);
        assert!(r.passed(), "{r}");
    }
}
