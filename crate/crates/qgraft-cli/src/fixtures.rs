//! Regression fixtures pinning displayed constants of the reference
//! construction. Three fixtures document places where the computed value
//! disagrees with the reference in a way that looks like a misprint; those
//! report as erratum-flagged rather than failing, and the set is fixed.

use qgraft_core::braided::{relations_from_pair, two_word_coefficient, Side};
use qgraft_core::graft::{run_pipeline, GraftSpec};
use qgraft_core::qlinalg::{permutation_p, CompositeMatrix};
use qgraft_core::qscalar::{parse_scalar, rat, rat_int, Rat, Scalar};
use qgraft_core::rmatrix::{check_frt, majid_pair, standard_r, tensor_r, MajidPair, Module, RepSpec};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    ErratumFlagged,
    Fail,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::ErratumFlagged => "ERRATUM",
            Outcome::Fail => "FAIL",
        }
    }

    /// Stable machine-readable name used in the JSON report.
    pub fn json_name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::ErratumFlagged => "erratum-flagged",
            Outcome::Fail => "fail",
        }
    }
}

pub struct Fixture {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

fn sc(text: &str) -> Scalar {
    parse_scalar(text).expect("fixture scalar")
}

fn rep(rank: usize, module: Module, norm: Rat) -> RepSpec {
    RepSpec::new(rank, module, norm).expect("fixture rep")
}

fn fixture(name: &'static str, ok: bool, detail: String) -> Fixture {
    Fixture { name, outcome: if ok { Outcome::Pass } else { Outcome::Fail }, detail }
}

/// Pass when computed equals the reference; erratum-flagged otherwise.
fn soft_fixture(name: &'static str, computed: &str, reference: &str, note: &str) -> Fixture {
    if computed == reference {
        Fixture { name, outcome: Outcome::Pass, detail: format!("computed {computed}") }
    } else {
        Fixture {
            name,
            outcome: Outcome::ErratumFlagged,
            detail: format!("computed {computed}, reference prints {reference}; {note}"),
        }
    }
}

fn type_a_pair(n: usize, m: usize) -> MajidPair {
    let rn = standard_r(&rep(n, Module::Natural, rat_int(1)));
    let rm = standard_r(&rep(m, Module::Dual, rat_int(1)));
    majid_pair(&tensor_r(&[rn, rm]).expect("tensor"), &sc("-1")).expect("pair")
}

fn f4_pair() -> MajidPair {
    let r3 = standard_r(&rep(3, Module::Natural, rat_int(1)));
    let r2 = standard_r(&rep(2, Module::Natural, rat(1, 2)));
    majid_pair(&tensor_r(&[r3, r2]).expect("tensor"), &sc("-q^(1/2)")).expect("pair")
}

fn scalar_set(values: &[Scalar]) -> Vec<String> {
    let mut v: Vec<Scalar> = values.to_vec();
    v.sort_by(|a, b| a.sort_cmp(b));
    v.iter().map(ToString::to_string).collect()
}

pub fn run_all() -> Vec<Fixture> {
    let mut out = Vec::new();

    // shared artifacts
    let r2 = standard_r(&rep(2, Module::Natural, rat_int(1)));
    let r2h = standard_r(&rep(2, Module::Natural, rat(1, 2)));
    let r3 = standard_r(&rep(3, Module::Natural, rat_int(1)));
    let a_pair = type_a_pair(2, 2);
    let f_pair = f4_pair();
    let a_report = run_pipeline(&GraftSpec::type_a(2, 2).expect("preset")).expect("pipeline");
    let f_report = run_pipeline(&GraftSpec::f4()).expect("pipeline");
    let r1_report = run_pipeline(&GraftSpec::rank1()).expect("pipeline");

    // the braiding of the sl_2 natural module satisfies (PR-q)(PR+q^-1)=0
    {
        let p = permutation_p(r2.shape());
        let pr = p.matmul(&r2);
        let id = CompositeMatrix::identity(r2.shape().clone());
        let lhs = pr.sub(&id.scale(&sc("q"))).matmul(&pr.add(&id.scale(&sc("q^-1"))));
        out.push(fixture(
            "sl2-braiding-quadratic",
            lhs.mat().entries().next().is_none(),
            "(PR - q)(PR + q^-1) = 0".into(),
        ));
    }

    // normalized R' of the type-A pair against its displayed closed form
    {
        let p = permutation_p(a_pair.r.shape());
        let id = CompositeMatrix::identity(a_pair.r.shape().clone());
        let want = a_pair
            .r
            .matmul(&p)
            .matmul(&a_pair.r)
            .sub(&a_pair.r.matmul(&id.scale(&sc("q^2+q^-2"))))
            .add(&p.scale(&sc("2")));
        out.push(fixture(
            "type-a-rprime-formula",
            a_pair.rprime == want,
            "R' = RPR - (q^2+q^-2)R + 2P".into(),
        ));
    }

    // R' of the non-simply-laced pair: all four displayed coefficients
    {
        let p = permutation_p(f_pair.r.shape());
        let pr = p.matmul(&f_pair.r);
        let c1 = sc("q^-1-q-q^-2");
        let c2 = sc("q^-1-1-q^-3");
        let c3 = sc("q^-2+1");
        let want = f_pair
            .r
            .matmul(&pr)
            .matmul(&pr)
            .add(&f_pair.r.matmul(&pr).scale(&c1))
            .add(&f_pair.r.scale(&c2))
            .add(&p.scale(&c3));
        out.push(fixture(
            "f4-rprime-coefficients",
            f_pair.rprime == want,
            "R' = R(PR)^2 + (q^-1-q-q^-2)R(PR) + (q^-1-1-q^-3)R + (q^-2+1)P".into(),
        ));
    }

    // degenerate single-factor pair: PR' = PR - q^2 + 1
    {
        let pair = majid_pair(&r2, &sc("-q^-1")).expect("pair");
        let p = permutation_p(pair.r.shape());
        let id = CompositeMatrix::identity(pair.r.shape().clone());
        let want = pair.r.add(&p.matmul(&id.scale(&sc("1-q^2"))));
        out.push(fixture(
            "rank1-rprime",
            pair.rprime == want,
            "PR' = PR + (1 - q^2)".into(),
        ));
    }

    // pinned FRT constants and their product rule
    {
        let c_half = check_frt(&r2h).expect("frt");
        out.push(fixture(
            "frt-constant-short-sl2",
            c_half == sc("q^-2"),
            format!("computed {c_half}, pinned q^-2"),
        ));
        let c3 = check_frt(&r3).expect("frt");
        let c_tensor =
            check_frt(&tensor_r(&[r3.clone(), r2h.clone()]).expect("tensor")).expect("frt");
        out.push(fixture(
            "frt-product-rule",
            c_tensor == &c3 * &c_half && c_tensor == sc("q^-8"),
            format!("tensor constant {c_tensor} = ({c3})({c_half})"),
        ));
    }

    // braiding spectra, rescaled by lambda back to the raw tensor braiding
    let raw_spectrum = |pair: &qgraft_core::rmatrix::MajidPair| {
        scalar_set(&pair.eigenvalues.iter().map(|e| e * &pair.lambda).collect::<Vec<_>>())
    };
    out.push(fixture(
        "type-a-eigenvalues",
        raw_spectrum(&a_pair) == scalar_set(&[sc("q^2"), sc("-1"), sc("q^-2")]),
        format!("{:?}", raw_spectrum(&a_pair)),
    ));
    out.push(fixture(
        "f4-eigenvalues",
        raw_spectrum(&f_pair)
            == scalar_set(&[sc("q^(3/2)"), sc("-q^(1/2)"), sc("-q^(-1/2)"), sc("q^(-3/2)")]),
        format!("{:?}", raw_spectrum(&f_pair)),
    ));

    // cross-relation exponents of the new node
    out.push(fixture(
        "type-a-self-exponent",
        a_report.self_exponent == rat_int(2),
        format!("q^({})", a_report.self_exponent),
    ));
    out.push(fixture(
        "type-a-neighbor-exponents",
        a_report.neighbor_exponents == vec![rat_int(-1), rat_int(-1)],
        format!("{:?}", a_report.neighbor_exponents.iter().map(ToString::to_string).collect::<Vec<_>>()),
    ));
    out.push(fixture(
        "f4-self-exponent",
        f_report.self_exponent == rat_int(1),
        format!("q^({})", f_report.self_exponent),
    ));
    out.push(fixture(
        "f4-long-neighbor-exponent",
        f_report.neighbor_exponents.get(1) == Some(&rat_int(-1)),
        format!("q^({})", f_report.neighbor_exponents[1]),
    ));

    // the short-node exponent: reference prints the opposite sign
    {
        let computed = format!("q^({})", f_report.neighbor_exponents[2]);
        out.push(soft_fixture(
            "f4-short-neighbor-exponent-sign",
            &computed,
            "q^(1/2)",
            "magnitude agrees; classification is unaffected",
        ));
    }

    // same-column commutation coefficient of the type-A braided algebra
    {
        let alg = relations_from_pair(&a_pair, Side::Vector);
        let computed = two_word_coefficient(&alg.quad_relations, &[2, 0], &[0, 2])
            .map(|c| c.to_string())
            .unwrap_or_else(|| "none".into());
        out.push(soft_fixture(
            "same-column-coefficient",
            &computed,
            "(2*q^2 + 3)/(2*q + 2*q^-1)",
            "the reference value does not specialize to 1 at q = 1",
        ));
    }

    // placement of the off-diagonal entries of the standard R-matrix
    {
        let shape = r2.shape();
        let upper = r2.get_flat(
            shape.flatten(&[0]),
            shape.flatten(&[1]),
            shape.flatten(&[1]),
            shape.flatten(&[0]),
        );
        let lower = r2.get_flat(
            shape.flatten(&[1]),
            shape.flatten(&[0]),
            shape.flatten(&[0]),
            shape.flatten(&[1]),
        );
        let as_displayed = upper == sc("q-q^-1") && lower.is_zero();
        out.push(Fixture {
            name: "offdiagonal-placement",
            outcome: if as_displayed { Outcome::ErratumFlagged } else { Outcome::Fail },
            detail: if as_displayed {
                "entries sit at row (i,j), column (j,i) for i < j, matching the displayed \
                 matrices; the reference's summation form places them transposed"
                    .into()
            } else {
                "off-diagonal entries disagree with the displayed matrices".into()
            },
        });
    }

    // graded dimensions
    out.push(fixture(
        "type-a-hilbert-symmetric",
        a_report.hilbert == vec![1, 4, 10, 20, 35],
        format!("{:?}", a_report.hilbert),
    ));
    out.push(fixture(
        "f4-hilbert",
        f_report.hilbert == vec![1, 6, 30, 112, 375],
        format!("{:?}", f_report.hilbert),
    ));

    // classifications
    out.push(fixture(
        "type-a-classification",
        a_report.classification == "A_3",
        a_report.classification.clone(),
    ));
    {
        let norms: Vec<Rat> =
            (0..4).map(|i| f_report.sym_pairings[i][i].clone()).collect();
        let ok = f_report.classification == "F_4"
            && norms == vec![rat_int(2), rat_int(2), rat_int(1), rat_int(1)];
        out.push(fixture(
            "f4-classification",
            ok,
            format!(
                "{} with root norms {:?}",
                f_report.classification,
                norms.iter().map(ToString::to_string).collect::<Vec<_>>()
            ),
        ));
    }
    out.push(fixture(
        "rank1-classification",
        r1_report.classification == "A_2",
        r1_report.classification.clone(),
    ));

    out
}
