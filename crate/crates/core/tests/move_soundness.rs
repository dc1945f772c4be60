use inca::canon::{canonical_code, underlying_graph};
use inca::invariants::{count_colorings, linking_graph, LinkingVariant, MultiQuandle};
use inca::io::random::{sample_diagram, scramble};
use inca::moves::{apply_with_inverse, enumerate_moves, KindSet, MoveKind};
use inca::GaussDiagram;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn panel() -> Vec<MultiQuandle> {
    vec![
        MultiQuandle::trivial(3),
        MultiQuandle::dihedral(3),
        MultiQuandle::dihedral(5),
        MultiQuandle::tetrahedral(),
    ]
}

/// Random diagrams, half of them pushed through a short walk so that R2/R3
/// sites actually occur.
fn samples(seed: u64, n: usize) -> Vec<GaussDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let d = sample_diagram(&mut rng, 12, 3);
            if i % 2 == 0 {
                scramble(&d, 3, KindSet::stable(), &mut rng).0
            } else {
                d
            }
        })
        .filter(|d| d.vertex_count() <= 20)
        .collect()
}

#[test]
fn colorings_survive_every_sound_move() {
    let panel = panel();
    let mut checked = 0;
    for d in samples(11, 300) {
        let before: Vec<u128> = panel.iter().map(|q| count_colorings(&d, q)).collect();
        for mv in enumerate_moves(&d, KindSet::stable(), true) {
            if mv.kind() == MoveKind::R2Insert && checked % 7 != 0 {
                checked += 1;
                continue;
            }
            let (out, _) = apply_with_inverse(&d, &mv).unwrap();
            let after: Vec<u128> = panel.iter().map(|q| count_colorings(&out, q)).collect();
            assert_eq!(before, after, "{mv:?} on\n{}", inca::io::serialize(&d));
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn inverse_restores_code() {
    for d in samples(12, 200) {
        let code = canonical_code(&d);
        for mv in enumerate_moves(&d, KindSet::all(), true) {
            let (out, inv) = apply_with_inverse(&d, &mv).unwrap();
            assert!(out.validate().is_empty());
            let (back, _) = apply_with_inverse(&out, &inv).unwrap();
            assert_eq!(canonical_code(&back), code, "{mv:?}");
        }
    }
}

#[test]
fn linking_codes_survive_moves() {
    for d in samples(13, 300) {
        let ru = linking_graph(&d, LinkingVariant::ReducedUnframed).canonical_code();
        let full = linking_graph(&d, LinkingVariant::Full).canonical_code();
        let red = linking_graph(&d, LinkingVariant::Reduced).canonical_code();
        let graph = underlying_graph(&d);
        for mv in enumerate_moves(&d, KindSet::stable(), true) {
            let (out, _) = apply_with_inverse(&d, &mv).unwrap();
            assert_eq!(
                linking_graph(&out, LinkingVariant::ReducedUnframed).canonical_code(),
                ru,
                "{mv:?}"
            );
            let k = mv.kind();
            if matches!(k, MoveKind::R2Cancel | MoveKind::R2Insert) {
                assert_eq!(
                    linking_graph(&out, LinkingVariant::Full).canonical_code(),
                    full,
                    "{mv:?}"
                );
            }
            if !matches!(k, MoveKind::R1Add | MoveKind::R1Remove) {
                assert_eq!(
                    linking_graph(&out, LinkingVariant::Reduced).canonical_code(),
                    red,
                    "{mv:?}"
                );
            }
            if !matches!(k, MoveKind::Destab | MoveKind::Stab) {
                assert_eq!(underlying_graph(&out), graph, "{mv:?}");
            }
        }
    }
}
