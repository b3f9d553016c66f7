use qpainleve::catalog::{Catalog, Label};
use qpainleve::coeff::{ParamRat, Symbol};
use qpainleve::expr::parse_scalar;
use qpainleve::weyl::Slot;

fn cat() -> &'static Catalog {
    Catalog::builtin()
}

#[test]
fn chart_counts() {
    let counts: Vec<usize> = Label::ALL
        .iter()
        .map(|&l| cat().get_charts(l).unwrap().len())
        .collect();
    assert_eq!(counts, [2, 3, 3, 4, 5]);
    assert_eq!(counts.iter().sum::<usize>(), 17);
}

#[test]
fn painleve_two_hamiltonian_prints_normal_ordered() {
    let s = cat().get_system(Label::II).unwrap();
    assert_eq!(
        s.hamiltonian.to_string(),
        "-q^2*p + 1/2*p^2 - b*q - 1/2*t*p"
    );
    assert!(s.time_weight.is_one());
}

#[test]
fn painleve_four_parameter_map() {
    let n = cat().get_nagoya(Label::IV).unwrap();
    assert_eq!(n.maps.len(), 1);
    let m = &n.maps[0].assign;
    assert_eq!(m[&Symbol::alpha(0)], parse_scalar("4 - 2*a - 2*b").unwrap());
    assert_eq!(m[&Symbol::alpha(1)], parse_scalar("2*b + 2*h").unwrap());
}

#[test]
fn painleve_six_has_two_parameter_maps() {
    let n = cat().get_nagoya(Label::VI).unwrap();
    assert_eq!(n.maps.len(), 2);
    assert_eq!(n.prefactor.to_string(), "t^2 - t");
}

#[test]
fn chart_four_is_attached_to_chart_zero() {
    let c = cat().get_chart(Label::VI, 4).unwrap();
    assert_eq!(c.base, Some(0));
    assert_eq!(c.base_vars.first(), "x0");
    assert_eq!(c.laurent_side(), Slot::Second);
    assert!(c.as_printed.is_some());
    for (l, c) in Label::ALL
        .iter()
        .flat_map(|&l| cat().get_charts(l).unwrap().iter().map(move |c| (l, c)))
    {
        if (l, c.index) != (Label::VI, 4) {
            assert_eq!(c.base, None);
        }
    }
}

#[test]
fn goldens_are_polynomial_in_chart_variables() {
    for l in Label::ALL {
        for c in cat().get_charts(l).unwrap() {
            let g = cat().get_golden(l, c.index).unwrap();
            assert!(g.hamiltonian.is_polynomial(), "{l} {}", c.index);
            assert_eq!(g.hamiltonian.vars(), &c.vars);
        }
    }
}

#[test]
fn symmetry_tables() {
    let names = |l| {
        cat()
            .get_symmetries(l)
            .unwrap()
            .iter()
            .map(|s| s.name.clone())
            .collect::<Vec<_>>()
    };
    assert_eq!(names(Label::II), ["s0", "s1"]);
    assert_eq!(names(Label::VI), ["s0", "s1", "s2", "s3", "s4"]);
    let s1 = cat().get_symmetry(Label::III, "s1").unwrap();
    assert_eq!(s1.t_map, -ParamRat::var(Symbol::T));
    let s = cat().get_symmetry(Label::IV, "s1").unwrap();
    assert_eq!(s.p.to_string(), "p + alpha1/q");
}

#[test]
fn unknown_entries() {
    assert!(cat().get_chart(Label::II, 2).is_err());
    assert!(cat().get_symmetry(Label::II, "s2").is_err());
}

#[test]
fn directory_override_reads_the_same_data() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/catalog");
    let c = Catalog::from_dir(std::path::Path::new(dir)).unwrap();
    assert_eq!(
        c.get_system(Label::V).unwrap().hamiltonian,
        cat().get_system(Label::V).unwrap().hamiltonian
    );
}
