use divpow::construct::*;
use divpow::gamma::{pure_symbol, veronese, GammaElement, MonomialBasis, SymElement};
use divpow::multiindex::{multinomial, Composition};
use divpow::gamma::apply_gl;
use divpow::stab::{brute_point_stab_line, lie_stab_line};
use divpow::{Error, FieldMatrix, FieldSpec, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f(p: u64) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

fn unit(field: FieldSpec, d: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); d];
    v[i] = field.one();
    v
}

/// Representatives of `P^{d-1}(F_p)`: first nonzero coordinate 1.
fn projective_points(field: FieldSpec, d: usize) -> Vec<Vec<Scalar>> {
    let p = field.order().unwrap();
    let mut out = Vec::new();
    for code in 0..p.pow(d as u32) {
        let digits: Vec<u64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
        if digits.iter().find(|&&v| v != 0) == Some(&1) {
            out.push(digits.iter().map(|&v| field.from_u64(v)).collect());
        }
    }
    out
}

#[test]
fn flagship_tensor() {
    let spec = build_free_tensor(3, f(2), Some(&[2, 4, 8, 16])).unwrap();
    assert_eq!(spec.r, 30);
    assert_eq!(MonomialBasis::new(3, 30).len(), 496);
    assert!(!spec.x.is_zero());
    assert_eq!(build_free_tensor(3, f(2), None).unwrap(), spec);
    let rational = build_free_tensor(3, f(0), Some(&[2, 4, 8, 16])).unwrap();
    assert!(!rational.x.is_zero());
    // Mod 2 the support shrinks to the terms with odd coefficient.
    assert!(spec.x.terms().all(|(c, _)| !rational.x.coeff(c).is_zero()));
}

#[test]
fn free_tensor_errors() {
    assert!(matches!(build_free_tensor(3, f(2), Some(&[2, 3, 8, 16])), Err(Error::NotDisjoint(..))));
    assert!(matches!(build_free_tensor(2, f(2), None), Err(Error::InvalidArgument(_))));
    assert!(matches!(build_free_tensor(3, f(2), Some(&[2, 4, 8])), Err(Error::InvalidArgument(_))));
}

#[test]
fn free_tensor_stabilizers_are_trivial() {
    for p in [0, 2, 3, 5] {
        let spec = build_free_tensor(3, f(p), None).unwrap();
        assert!(lie_stab_line(&spec.x).unwrap().pgl_trivial, "p={p}");
    }
    let spec = build_free_tensor(4, f(2), None).unwrap();
    assert!(lie_stab_line(&spec.x).unwrap().pgl_trivial);
    let spec = build_free_tensor(3, f(2), None).unwrap();
    let r = brute_point_stab_line(&spec.x, 2).unwrap();
    assert_eq!((r.scanned, r.elements.len()), (168, 1));
    assert!(r.trivial);
}

#[test]
fn free_tensor_serializes_with_metadata() {
    let spec = build_free_tensor(3, f(2), None).unwrap();
    let v: serde_json::Value = serde_json::to_value(&spec).unwrap();
    assert_eq!(v["char"], 2);
    assert_eq!(v["a"], serde_json::json!([2, 4, 8, 16]));
    assert_eq!(v["r"], 30);
    assert_eq!(v["x"]["degree"], 30);
}

#[test]
fn mult_map_examples() {
    let f2 = f(2);
    let r = mult_map_matrix(f2, &unit(f2, 2, 1), 1, 2).unwrap();
    assert!(r.disjoint && r.full_column_rank);
    assert_eq!(r.rank, 2);
    let r = mult_map_matrix(f2, &unit(f2, 2, 0), 1, 1).unwrap();
    assert!(!r.disjoint && !r.full_column_rank);
    assert_eq!(mult_map_matrix(f2, &[f2.zero(), f2.zero()], 1, 2).unwrap_err(), Error::ZeroVector);
    // [e_1]_a ↦ C(a+b, a) [e_1]_{a+b}.
    let q = f(0);
    let r = mult_map_matrix(q, &unit(q, 2, 0), 2, 3).unwrap();
    let target = MonomialBasis::new(2, 5);
    let row = target.index_of(&Composition::new(vec![5, 0])).unwrap();
    assert_eq!(r.matrix.get(row, 0), &q.from_i64(10));
}

#[test]
fn mult_maps_injective_on_small_cases() {
    for p in [2, 3] {
        let field = f(p);
        for d in 1..=2 {
            for a in 1..=4 {
                for b in 1..=6 {
                    let disjoint = divpow::multiindex::is_f_disjoint(&[a as u64, b as u64], field);
                    if !disjoint {
                        continue;
                    }
                    for y in projective_points(field, d) {
                        assert!(mult_map_matrix(field, &y, a, b).unwrap().full_column_rank);
                    }
                }
            }
        }
    }
}

#[test]
fn tau_examples() {
    let f2 = f(2);
    let x = tau_eval(f2, &[unit(f2, 2, 0), unit(f2, 2, 1)], &[2, 4]).unwrap();
    assert_eq!(x, GammaElement::basis(f2, Composition::new(vec![2, 4])));
    assert_eq!(tau_eval(f2, &[vec![f2.zero(); 2], unit(f2, 2, 1)], &[2, 4]), Err(Error::ZeroVector));
    assert!(matches!(tau_eval(f2, &[unit(f2, 2, 0), unit(f2, 2, 1)], &[2, 3]), Err(Error::NotDisjoint(..))));
}

#[test]
fn tau_on_a_diagonal_is_veronese() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, a) in [(2u64, vec![2u64, 4, 8]), (3, vec![1, 3, 9]), (5, vec![5, 25]), (0, vec![1, 2, 4])] {
        let field = f(p);
        let r: u64 = a.iter().sum();
        // Disjoint terms have no common base-p digits, so the constant is 1
        // in characteristic p; over Q it is the multinomial coefficient.
        let constant = if p == 0 { field.from_biguint(&multinomial(&a)) } else { field.one() };
        for _ in 0..10 {
            let v: Vec<Scalar> = (0..3).map(|_| field.from_i64(rng.gen_range(-3..4))).collect();
            if v.iter().all(Scalar::is_zero) {
                continue;
            }
            let points = vec![v.clone(); a.len()];
            let t = tau_eval(field, &points, &a).unwrap();
            assert_eq!(t, veronese(field, &v, r as u32).unwrap().scale(&constant), "p={p}");
        }
    }
}

#[test]
fn tau_is_injective_over_f3() {
    let f3 = f(3);
    let pts = projective_points(f3, 2);
    assert_eq!(pts.len(), 4);
    let mut images = Vec::new();
    for x in &pts {
        for y in &pts {
            images.push(tau_eval(f3, &[x.clone(), y.clone()], &[3, 9]).unwrap());
        }
    }
    for i in 0..images.len() {
        for j in 0..images.len() {
            assert_eq!(images[i].proportionality(&images[j]).is_some(), i == j);
        }
    }
}

#[test]
fn shift_powers() {
    assert_eq!(shift_power(2, f(2)).unwrap(), 4);
    assert_eq!(shift_power(2, f(0)).unwrap(), 3);
    assert_eq!(shift_power(8, f(3)).unwrap(), 9);
    assert_eq!(shift_power(1, f(2)).unwrap(), 2);
    assert!(shift_power(0, f(2)).is_err());
    for p in [0, 2, 3, 5] {
        for m in 1..50 {
            let q = shift_power(m, f(p)).unwrap();
            assert!(q > m && m + q < 2 * q);
        }
    }
}

#[test]
fn build_l_examples() {
    let f2 = f(2);
    let z = f2.vector(&[1, 1, 0]);
    let lz = vec![pure_symbol(f2, &z, 2).unwrap()];
    let data = build_l(&lz, &unit(f2, 3, 2)).unwrap();
    assert_eq!((data.m, data.q, data.n), (2, 4, 6));
    assert_eq!(data.l.len(), 1);
    assert_eq!(data.l[0], lz[0].mul(&pure_symbol(f2, &unit(f2, 3, 2), 4).unwrap()).unwrap());

    let full: Vec<GammaElement> =
        MonomialBasis::new(2, 2).compositions().iter().map(|c| GammaElement::basis(f2, c.clone())).collect();
    let data = build_l(&full, &f2.vector(&[1, 1])).unwrap();
    assert_eq!(data.l.len(), 3);
    assert_eq!(data.n, 6);
    assert!(data.m_plus_one_nonzero);

    let f3 = f(3);
    let data = build_l(&[GammaElement::basis(f3, Composition::new(vec![2, 0]))], &unit(f3, 2, 1)).unwrap();
    assert!(!data.m_plus_one_nonzero);

    assert_eq!(build_l(&[full[0].clone(), full[0].clone()], &f2.vector(&[1, 1])), Err(Error::LinearlyDependent));
    assert_eq!(build_l(&full, &f2.vector(&[0, 0])), Err(Error::ZeroVector));
}

#[test]
fn shape_examples() {
    let r = shape_separation_check(2, f(2), 2).unwrap();
    assert_eq!((r.q, r.n, r.compositions), (4, 6, 7));
    assert_eq!((r.shape_a, r.shape_b, r.overlapping), (3, 3, 0));
    assert!(r.certified);
    let r = shape_separation_check(1, f(0), 3).unwrap();
    assert_eq!((r.q, r.n, r.compositions), (2, 3, 10));
    assert!(r.certified);
}

#[test]
fn tannaka_lie_on_a_torus_example() {
    // L_Z spanned by the squares of the coordinate vectors: the diagonal
    // torus, which fixes every coordinate line.
    for p in [0, 2, 5] {
        let field = f(p);
        let lz: Vec<GammaElement> = (0..4)
            .map(|i| {
                let mut parts = vec![0; 4];
                parts[i] = 2;
                GammaElement::basis(field, Composition::new(parts))
            })
            .collect();
        let data = build_l(&lz, &unit(field, 4, 3)).unwrap();
        let r = tannaka_lie_check(&data).unwrap();
        assert_eq!(r.dim_l_z, 4);
        assert!(r.w0_fixed);
        assert_eq!(r.dim_l, r.dim_l_z);
    }
}

#[test]
fn fixed_point_examples() {
    let f2 = f(2);
    let w = fixed_point_w0(f2, 2, 2, 30).unwrap();
    assert_eq!(w.symbol, GammaElement::basis(f2, Composition::new(vec![0, 2, 0, 28])));
    assert_eq!(w.indices, (1, 3));
    // τ(e_n, e_{2n}, …, e_{2n}).
    let (en, e2n) = (unit(f2, 4, 1), unit(f2, 4, 3));
    let tau = tau_eval(f2, &[en, e2n.clone(), e2n.clone(), e2n], &[2, 4, 8, 16]).unwrap();
    assert_eq!(tau, w.symbol);
    assert!(fixed_point_w0(f2, 2, 30, 30).is_err());
    assert!(fixed_point_w0(f2, 0, 1, 3).is_err());
}

#[test]
fn diagonal_group_fixes_w0() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f3 = f(3);
    let w = fixed_point_w0(f3, 3, 3, 12).unwrap();
    for _ in 0..10 {
        let g = loop {
            let v: Vec<i64> = (0..4).map(|_| rng.gen_range(0..3)).collect();
            let g = FieldMatrix::from_ints(f3, 2, 2, &v).unwrap();
            if g.is_invertible() {
                break g;
            }
        };
        let big = diagonal_embedding(&extend_fixing_last(&g).unwrap()).unwrap();
        assert_eq!(big.rows(), 6);
        assert!(w.symbol.proportionality(&apply_gl(&big, &w.symbol).unwrap()).is_some());
    }
}

#[test]
fn bookkeeping_helpers() {
    assert_eq!(min_block_size(0), 2);
    assert_eq!(min_block_size(3), 3);
    assert_eq!(min_block_size(4), 3);
    for dim_g in 0..40 {
        let n = min_block_size(dim_g);
        assert!(2 * n - 1 > dim_g && (n == 2 || 2 * (n - 1) - 1 <= dim_g));
    }
    assert!(final_side_conditions(3, 5, 20));
    assert!(!final_side_conditions(5, 5, 20));
    assert!(!final_side_conditions(15, 5, 20));
    assert!(final_side_conditions(3, 25, 20));
}

#[test]
fn annihilator_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for p in [2, 3] {
        let field = f(p);
        let basis = MonomialBasis::new(3, 2);
        for _ in 0..20 {
            let k = rng.gen_range(1..4);
            let e_x: Vec<SymElement> = (0..k)
                .map(|_| {
                    let v: Vec<Scalar> = (0..basis.len()).map(|_| field.from_u64(rng.gen_range(0..p))).collect();
                    SymElement::from_dense(field, &basis, &v).unwrap()
                })
                .collect();
            let l_x = gamma_annihilator(&e_x).unwrap();
            for z in projective_points(field, 3) {
                let (in_l, vanishes) = annihilator_membership(&e_x, &z).unwrap();
                assert_eq!(in_l, vanishes);
            }
            for l in &l_x {
                for e in &e_x {
                    assert!(divpow::gamma::pairing(l, e).unwrap().is_zero());
                }
            }
        }
    }
    // E_X = {x_1 x_2}: the union of two coordinate planes.
    let q = f(0);
    let xy = SymElement::basis(q, Composition::new(vec![1, 1, 0]));
    assert_eq!(gamma_annihilator(&[xy.clone()]).unwrap().len(), 5);
    assert_eq!(annihilator_membership(&[xy.clone()], &q.vector(&[0, 1, 1])).unwrap(), (true, true));
    assert_eq!(annihilator_membership(&[xy], &q.vector(&[1, 1, 1])).unwrap(), (false, false));
}
