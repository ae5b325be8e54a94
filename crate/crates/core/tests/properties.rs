//! Property tests for the algebraic invariants of each module.
mod common;

use common::*;
use cotwist_core::action::{isotypic_basis, regrade_presentation, validate_action};
use cotwist_core::crossed::CrossedModel;
use cotwist_core::freealg::change_basis;
use cotwist_core::gbasis::{hilbert_coeffs, is_regular_to_degree, TruncGB};
use cotwist_core::presets::{klein_action_x, klein_duality, preset, preset_in_x_basis, ALGEBRAS};
use cotwist_core::twist::{
    twist_presentation, verify_coboundary_rescaling, word_twist_scalar, word_twist_scalar_right,
};
use cotwist_core::{AbGroup, Cocycle, CycNum, GenMap, GroupAut, Matrix, NcPoly, Presentation, Word};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_cyc(r: &mut ChaCha8Rng, n: u32) -> CycNum {
    let phi = cotwist_core::cyclo::totient(n) as usize;
    let coeffs: Vec<BigRational> = (0..phi)
        .map(|_| BigRational::new(r.gen_range(-5i64..=5).into(), r.gen_range(1i64..=4).into()))
        .collect();
    coeffs.iter().enumerate().fold(CycNum::zero(n), |acc, (k, q)| {
        &acc + &CycNum::zeta_pow(n, k as i64).scale(q)
    })
}

/// A random cocycle on `g`: a power of a bilinear form times a random coboundary.
fn random_cocycle(r: &mut ChaCha8Rng, g: &AbGroup, m: u32) -> Cocycle {
    let n = g.order();
    let mut rho: Vec<CycNum> = (0..n).map(|_| CycNum::zeta_pow(m, r.gen_range(0..m as i64))).collect();
    rho[0] = CycNum::one(m);
    let cob = Cocycle::coboundary(g, &rho).unwrap().embed(m).unwrap();
    let f = g.factors().to_vec();
    let k = r.gen_range(0..m as i64);
    let table: Vec<CycNum> = g
        .elements()
        .iter()
        .flat_map(|a| {
            let f = f.clone();
            g.elements().into_iter().map(move |b| {
                // exp(2 pi i k a_0 b_1 / gcd) on the first two factors
                if f.len() < 2 {
                    return CycNum::one(m);
                }
                let d = num_integer::gcd(f[0], f[1]);
                let e = (a.0[0] * b.0[1]) as i64 * k * (m / d) as i64;
                CycNum::zeta_pow(m, e)
            })
        })
        .collect();
    Cocycle::new(g.clone(), table).unwrap().mul(&cob).unwrap()
}

const CONDUCTORS: [u32; 5] = [1, 2, 4, 8, 12];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(seed in any::<u64>(), ci in 0usize..5) {
        let n = CONDUCTORS[ci];
        let mut r = rng(seed);
        let (a, b, c) = (random_cyc(&mut r, n), random_cyc(&mut r, n), random_cyc(&mut r, n));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_is_a_ring_map(seed in any::<u64>(), ci in 0usize..5, k in 1u32..4) {
        let n = CONDUCTORS[ci];
        let m = n * k;
        let mut r = rng(seed);
        let (a, b) = (random_cyc(&mut r, n), random_cyc(&mut r, n));
        let (ea, eb) = (a.embed(m).unwrap(), b.embed(m).unwrap());
        prop_assert_eq!((&a * &b).embed(m).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).embed(m).unwrap(), &ea + &eb);
        prop_assert_eq!(a == b, ea == eb);
    }

    #[test]
    fn conjugation_is_an_involutive_ring_map(seed in any::<u64>(), ci in 0usize..5) {
        let n = CONDUCTORS[ci];
        let mut r = rng(seed);
        let (a, b) = (random_cyc(&mut r, n), random_cyc(&mut r, n));
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn polynomial_ring_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 3, 1, 4, 3);
        let q = random_poly(&mut r, 3, 2, 4, 3);
        let s = random_poly(&mut r, 3, 1, 4, 3);
        prop_assert_eq!(p.mul(&q).mul(&s), p.mul(&q.mul(&s)));
        prop_assert_eq!(p.mul(&q.add(&s.mul(&s))), p.mul(&q).add(&p.mul(&s.mul(&s))));
    }

    #[test]
    fn genmap_composition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = GenMap::new((0..3).map(|_| random_poly(&mut r, 3, 1, 4, 2)).collect());
        let g = GenMap::new((0..3).map(|_| random_poly(&mut r, 3, 1, 4, 2)).collect());
        let p = random_poly(&mut r, 3, 3, 4, 4);
        prop_assert_eq!(f.compose(&g).unwrap().apply(&p).unwrap(), f.apply(&g.apply(&p).unwrap()).unwrap());
    }

    #[test]
    fn basis_change_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = loop {
            let rows = (0..3).map(|_| (0..3).map(|_| CycNum::from_int(4, r.gen_range(-2..=2))).collect()).collect();
            let m = Matrix::from_rows(4, rows).unwrap();
            if m.rank() == 3 {
                break m;
            }
        };
        let p = random_poly(&mut r, 3, 3, 4, 5);
        let there = change_basis(&p, &m, &[1, 1, 1]).unwrap();
        prop_assert_eq!(change_basis(&there, &m.inverse().unwrap(), &[1, 1, 1]).unwrap(), p);
    }

    #[test]
    fn canonicalization_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rels: Vec<NcPoly> = (0..3).map(|_| random_poly(&mut r, 3, 2, 4, 3)).filter(|p| !p.is_zero()).collect();
        let gens = ["a", "b", "c"].iter().map(|n| cotwist_core::freealg::GeneratorInfo::new(*n, 1)).collect::<Vec<_>>();
        let p = Presentation::new(4, gens.clone(), rels).unwrap();
        let again = Presentation::new(4, gens, p.relations().to_vec()).unwrap();
        prop_assert_eq!(again.relations(), p.relations());
    }

    #[test]
    fn cocycle_group_structure(seed in any::<u64>(), gi in 0usize..3) {
        let g = AbGroup::new([vec![2, 2], vec![2, 4], vec![3, 3]][gi].clone()).unwrap();
        let m = if gi == 2 { 3 } else { 8 };
        let mut r = rng(seed);
        let a = random_cocycle(&mut r, &g, m);
        let b = random_cocycle(&mut r, &g, m);
        prop_assert!(Cocycle::violation(&g, a.mul(&b).unwrap().table()).is_none());
        prop_assert!(Cocycle::violation(&g, a.inverse().table()).is_none());
        // pullback descends to classes
        let auts = GroupAut::all(&g);
        let s = &auts[r.gen_range(0..auts.len())];
        prop_assert_eq!(a.cohomologous(&b).unwrap(), a.pullback(s).unwrap().cohomologous(&b.pullback(s).unwrap()).unwrap());
    }

    #[test]
    fn coboundaries_validate(seed in any::<u64>()) {
        let g = AbGroup::new(vec![2, 4]).unwrap();
        let mut r = rng(seed);
        let mut rho: Vec<CycNum> = (0..8).map(|_| CycNum::zeta_pow(8, r.gen_range(0..8))).collect();
        rho[0] = CycNum::one(8);
        let mu = Cocycle::coboundary(&g, &rho).unwrap();
        prop_assert!(Cocycle::violation(&g, mu.table()).is_none());
        prop_assert!(mu.is_coboundary().is_some());
    }

    #[test]
    fn bracketing_independence(seed in any::<u64>(), gi in 0usize..3) {
        let g = AbGroup::new([vec![2, 2], vec![4, 4], vec![3, 3]][gi].clone()).unwrap();
        let m = [8, 16, 3][gi];
        let mut r = rng(seed);
        let mu = random_cocycle(&mut r, &g, m);
        let els = g.elements();
        for _ in 0..16 {
            let len = r.gen_range(0..7);
            let degs: Vec<_> = (0..len).map(|_| els[r.gen_range(0..els.len())].clone()).collect();
            prop_assert_eq!(word_twist_scalar(&degs, &mu), word_twist_scalar_right(&degs, &mu));
        }
    }

    #[test]
    fn double_twist_returns_the_original(seed in any::<u64>(), pi in 0usize..8) {
        let p = preset(ALGEBRAS[pi]).unwrap();
        let mut r = rng(seed);
        let mu = random_cocycle(&mut r, &AbGroup::klein(), 8);
        let spec = p.spec().unwrap().with_cocycle(mu.clone()).unwrap();
        let once = twist_presentation(&spec).unwrap();
        let back = twist_presentation(&spec.with_grading(once).unwrap().with_cocycle(mu.inverse()).unwrap()).unwrap();
        prop_assert!(back.presentation().same_relations(&p.presentation.embed(8).unwrap()));
    }

    #[test]
    fn coboundary_twist_is_a_rescaling(seed in any::<u64>(), pi in 0usize..8) {
        let p = preset(ALGEBRAS[pi]).unwrap();
        let mut r = rng(seed);
        let mut rho: Vec<CycNum> = (0..4).map(|_| CycNum::zeta_pow(8, r.gen_range(0..8))).collect();
        rho[0] = CycNum::one(8);
        prop_assert!(verify_coboundary_rescaling(&p.spec().unwrap(), &rho).unwrap());
    }

    #[test]
    fn confluence_of_random_reduction_orders(seed in any::<u64>(), pi in 0usize..8) {
        let p = preset(ALGEBRAS[pi]).unwrap();
        let gb = TruncGB::compute(&p.presentation, 5).unwrap();
        let mut r = rng(seed);
        let d = r.gen_range(2..=5);
        let mut f = random_poly(&mut r, 3, d, 4, 6);
        let expected = gb.normal_form(&f).unwrap();
        loop {
            let sites = gb.reduction_sites(&f);
            if sites.is_empty() {
                break;
            }
            f = gb.rewrite(&f, &sites[r.gen_range(0..sites.len())]);
        }
        prop_assert_eq!(f, expected);
    }

    #[test]
    fn crossed_product_associativity(seed in any::<u64>()) {
        let p = preset(ALGEBRAS[(seed % 8) as usize]).unwrap();
        let mut r = rng(seed);
        let mu = random_cocycle(&mut r, &AbGroup::klein(), 8);
        let spec = p.spec().unwrap().with_cocycle(mu).unwrap();
        let model = CrossedModel::new(&spec, 4).unwrap();
        let els = AbGroup::klein().elements();
        let mut pick = |deg: usize| {
            let a = random_poly(&mut r, 3, deg, 4, 2).embed(8).unwrap();
            model.embed_poly(&a, &els[r.gen_range(0..4)]).unwrap()
        };
        let (x, y, z) = (pick(1), pick(1), pick(2));
        let left = model.mul(&model.mul(&x, &y).unwrap(), &z).unwrap();
        let right = model.mul(&x, &model.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn gb_completion_is_idempotent_and_truncation_monotone() {
    for name in ALGEBRAS {
        let p = preset(name).unwrap();
        let gb6 = TruncGB::compute(&p.presentation, 6).unwrap();
        let again = TruncGB::complete(4, p.presentation.weights(), gb6.elements(), 6).unwrap();
        assert_eq!(again.elements(), gb6.elements(), "{name}");
        let fresh4 = TruncGB::compute(&p.presentation, 4).unwrap();
        let cut = gb6.truncate(4);
        assert_eq!(cut.elements(), fresh4.elements(), "{name}");
        for d in 0..=4 {
            assert_eq!(cut.normal_words(d), fresh4.normal_words(d), "{name} degree {d}");
        }
    }
}

#[test]
fn gb_dims_match_dense_oracle() {
    for name in ALGEBRAS {
        let p = preset(name).unwrap();
        assert_eq!(
            hilbert_coeffs(&p.presentation, 4).unwrap().dims,
            dense_quotient_dims(&p.presentation, 4),
            "{name}"
        );
    }
}

#[test]
fn isotypic_eigenvectors_and_round_trip() {
    let x = preset_in_x_basis("A(1,-1)").unwrap();
    let g = AbGroup::klein();
    let act = validate_action(&x, &g, klein_action_x()).unwrap();
    let d = klein_duality();
    let b = isotypic_basis(&x, &act, &d).unwrap();
    for (j, deg) in b.g_degree.iter().enumerate() {
        let v = b.matrix.row(j).to_vec();
        for h in g.elements() {
            let scaled: Vec<CycNum> = v.iter().map(|c| c * &d.chi(&g.inv(deg), &h)).collect();
            assert_eq!(act.apply_vec(&h, &v), scaled);
        }
    }
    // one new generator per character occurring in the action
    let mut counts = std::collections::BTreeMap::new();
    for deg in &b.g_degree {
        *counts.entry(g.index(deg)).or_insert(0) += 1;
    }
    assert_eq!(counts.values().sum::<i32>(), 3);
    let gr = regrade_presentation(&x, &b, &g).unwrap();
    let back: Vec<NcPoly> = gr
        .presentation()
        .relations()
        .iter()
        .map(|r| change_basis(r, &b.matrix, &[1, 1, 1]).unwrap())
        .collect();
    assert!(x.with_relations(back).unwrap().same_relations(&x));
}

#[test]
fn grading_is_multiplicative() {
    let p = preset("A(1,-1)").unwrap();
    let gr = &p.grading;
    let g = gr.group();
    let mut r = rng(11);
    for _ in 0..200 {
        let u: Vec<usize> = (0..r.gen_range(0..5)).map(|_| r.gen_range(0..3)).collect();
        let v: Vec<usize> = (0..r.gen_range(0..5)).map(|_| r.gen_range(0..3)).collect();
        let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
        assert_eq!(gr.word_degree(&uv), g.mul(&gr.word_degree(&u), &gr.word_degree(&v)));
        let m = NcPoly::monomial(Word(uv.clone()), CycNum::one(4));
        assert_eq!(gr.g_degree_of(&m), Some(gr.word_degree(&uv)));
    }
}

#[test]
fn twisting_preserves_hilbert_and_regularity() {
    for name in ALGEBRAS {
        let p = preset(name).unwrap();
        let tw = twist_presentation(&p.spec().unwrap()).unwrap();
        assert_eq!(
            hilbert_coeffs(&p.presentation, 6).unwrap(),
            hilbert_coeffs(tw.presentation(), 6).unwrap(),
            "{name}"
        );
        for v in 0..3 {
            let a = NcPoly::generator(v, 4);
            assert_eq!(
                is_regular_to_degree(&a, &p.presentation, 4).unwrap(),
                is_regular_to_degree(&a, tw.presentation(), 4).unwrap(),
                "{name} generator {v}"
            );
        }
        // twisting twice by the order-two cocycle is the identity
        let twice = twist_presentation(&p.spec().unwrap().with_grading(tw).unwrap()).unwrap();
        assert!(twice.presentation().same_relations(&p.presentation), "{name}");
        assert_eq!(p.presentation.weights(), [1, 1, 1]);
    }
}

#[test]
fn isotypic_decomposition_of_crossed_product() {
    let p = preset("A(1,-1)").unwrap();
    let spec = p.spec().unwrap();
    let model = CrossedModel::new(&spec, 4).unwrap();
    let g = AbGroup::klein();
    let d = klein_duality();
    let dims = hilbert_coeffs(&p.presentation, 4).unwrap().dims;
    let elem = |deg: u32, v: &[CycNum]| -> cotwist_core::crossed::CrossedElem {
        model
            .component_basis(deg)
            .into_iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect()
    };
    for deg in 0..=4u32 {
        let total: usize = g
            .elements()
            .iter()
            .map(|h| model.isotypic_component(h, deg).unwrap().len())
            .sum();
        assert_eq!(total as u64, 4 * dims[deg as usize], "degree {deg}");
        assert_eq!(model.diagonal_invariants(deg).unwrap().len() as u64, dims[deg as usize]);
    }
    // M^{chi_a} M^{chi_b} lies in M^{chi_ab}
    for a in g.elements() {
        for b in g.elements() {
            let ab = g.mul(&a, &b);
            for x in model.isotypic_component(&a, 1).unwrap().iter().take(4) {
                for y in model.isotypic_component(&b, 2).unwrap().iter().take(6) {
                    let prod = model.mul(&elem(1, x), &elem(2, y)).unwrap();
                    for h in g.elements() {
                        let scaled: cotwist_core::crossed::CrossedElem =
                            prod.iter().map(|(k, c)| (k.clone(), c * &d.chi(&ab, &h))).collect();
                        assert_eq!(model.act(&prod, &h), scaled);
                    }
                }
            }
        }
    }
}

#[test]
fn schur_order_matches_brute_force_up_to_order_nine() {
    for f in abelian_groups_up_to(9) {
        let g = AbGroup::new(f.clone()).unwrap();
        assert_eq!(cotwist_core::grp::schur_order(&g), schur_order_brute(&g), "{f:?}");
    }
}
