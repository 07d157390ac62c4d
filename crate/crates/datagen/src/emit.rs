//! Renders every shipped data file with its provenance header.

use crate::{derived, fourgen, matrices};
use fpx_core::permgroup::{render_cycles, Permutation};
use fpx_core::words::Presentation;

fn header(lines: &[&str]) -> String {
    let mut out = String::new();
    for l in lines {
        out.push_str("# ");
        out.push_str(l);
        out.push('\n');
    }
    out
}

fn pres_file(lines: &[&str], p: &Presentation) -> String {
    let mut out = header(lines);
    out.push_str(&p.print());
    out
}

fn perms_file(lines: &[&str], degree: usize, perms: &[Permutation]) -> String {
    let mut out = header(lines);
    out.push_str(&format!("degree {}\n", degree));
    for p in perms {
        out.push_str(&render_cycles(p));
        out.push('\n');
    }
    out
}

const REGEN: &str = "Machine-generated and machine-verified; regenerate with: cargo run -p fpx-datagen";

/// All data files as (workspace-relative path, contents), in a fixed order.
pub fn all_files() -> Vec<(String, String)> {
    let mut out = Vec::new();

    let aut3 = fourgen::build_aut(3);
    let aut4 = fourgen::build_aut(4);
    let out3 = fourgen::build_out(3);
    let out4 = fourgen::build_out(4);

    out.push((
        "data/presentations/aut_f3.pres".to_string(),
        pres_file(
            &[
                "Automorphism group of the free group on x1, x2, x3.",
                "Generators: P swaps x1 and x2; Q cycles x1 -> x2 -> x3 -> x1;",
                "O inverts x1; U is the transvection x1 -> x1 x2.",
                "Relators come from rewriting a presentation on all 12 elementary",
                "transvections plus O onto these four generators; every relator was",
                "checked to act as the identity automorphism.",
                REGEN,
            ],
            &aut3,
        ),
    ));
    out.push((
        "data/presentations/aut_f4.pres".to_string(),
        pres_file(
            &[
                "Automorphism group of the free group on x1, x2, x3, x4.",
                "Generators: P swaps x1 and x2; Q cycles x1 -> x2 -> x3 -> x4 -> x1;",
                "O inverts x1; U is the transvection x1 -> x1 x2.",
                "Relators come from rewriting a presentation on all 24 elementary",
                "transvections plus O onto these four generators; every relator was",
                "checked to act as the identity automorphism.",
                REGEN,
            ],
            &aut4,
        ),
    ));
    out.push((
        "data/presentations/out_f3.pres".to_string(),
        pres_file(
            &[
                "Outer automorphism group of the free group on x1, x2, x3.",
                "Same generators as aut_f3.pres, with additional relators that act as",
                "conjugation by each basis letter; their normal closure is the inner",
                "automorphism group, so the presented group is Aut modulo Inn.",
                REGEN,
            ],
            &out3,
        ),
    ));
    out.push((
        "data/presentations/out_f4.pres".to_string(),
        pres_file(
            &[
                "Outer automorphism group of the free group on x1, x2, x3, x4.",
                "Same generators as aut_f4.pres, with additional relators that act as",
                "conjugation by each basis letter; their normal closure is the inner",
                "automorphism group, so the presented group is Aut modulo Inn.",
                REGEN,
            ],
            &out4,
        ),
    ));

    let specials = [
        ("saut_f3", &aut3, "aut_f3.pres"),
        ("sout_f3", &out3, "out_f3.pres"),
        ("saut_f4", &aut4, "aut_f4.pres"),
        ("sout_f4", &out4, "out_f4.pres"),
    ];
    for (name, parent, parent_file) in specials {
        let sp = derived::derive_special(parent, name);
        let line1 = format!(
            "Index-2 subgroup of {} (the determinant-one part), derived by",
            parent_file
        );
        out.push((
            format!("data/presentations/{}.pres", name),
            pres_file(
                &[
                    &line1,
                    "coset enumeration and Reidemeister-Schreier rewriting, then",
                    "simplified. The subgroup is unique at index 2 and perfect; both",
                    "facts are verified during generation.",
                    REGEN,
                ],
                &sp,
            ),
        ));
    }

    let (deg, perms) = matrices::u3_3_group();
    out.push((
        "data/atlas/u3_3.perms".to_string(),
        perms_file(
            &[
                "U3(3), order 6048, as the special unitary group of 3x3 matrices",
                "over the 9-element field acting on the 28 isotropic points of the",
                "Hermitian form with antidiagonal Gram matrix.",
                "Generators: three unipotent root elements, a torus element from a",
                "multiplicative generator, and a form-preserving antidiagonal",
                "involution; all were verified unitary with determinant one.",
                REGEN,
            ],
            deg,
            &perms,
        ),
    ));
    let (deg, perms) = matrices::l3_4_group();
    out.push((
        "data/atlas/l3_4.perms".to_string(),
        perms_file(
            &[
                "L3(4), order 20160, as the special linear group of 3x3 matrices",
                "over the 4-element field acting on the 21 points of the projective",
                "plane (the center acts trivially there).",
                "Generators: a transvection, a basis cycle, and a determinant-one",
                "diagonal; all were verified to have determinant one.",
                REGEN,
            ],
            deg,
            &perms,
        ),
    ));

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpx_core::permgroup::parse_perm_file;
    use fpx_core::words::parse_presentation;

    #[test]
    fn perms_file_round_trips() {
        let (deg, perms) = matrices::l3_4_group();
        let text = perms_file(&["test"], deg, &perms);
        let (d2, p2) = parse_perm_file(&text).unwrap();
        assert_eq!(d2, deg);
        assert_eq!(p2, perms);
    }

    #[test]
    fn pres_file_round_trips() {
        let p = Presentation::new(Some("t"), &["a"], vec![vec![1, 1]]);
        let text = pres_file(&["hello", "world"], &p);
        let q = parse_presentation(&text).unwrap();
        assert_eq!(p, q);
    }
}
