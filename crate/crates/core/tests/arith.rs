use corank::arith::{
    classify_pell, discriminant, euler_criterion, factor, is_prime, is_squarefree, kronecker, redei_matrix, scan,
    validate_reciprocity, PellKind,
};

fn squarefree_range(m: i64) -> impl Iterator<Item = i64> {
    (-m..=m).filter(|&d| d != 0 && d != 1 && is_squarefree(d))
}

#[test]
fn kronecker_matches_euler_on_small_primes() {
    for p in (3..2000u64).filter(|&p| is_prime(p)) {
        for a in 1..p as i64 {
            assert_eq!(kronecker(a, p as i64), euler_criterion(a, p), "({a}/{p})");
        }
    }
}

#[test]
fn minus_one_is_a_residue_iff_p_is_1_mod_4() {
    for p in (3..10_000u64).filter(|&p| is_prime(p)) {
        let want = if p % 4 == 3 { -1 } else { 1 };
        assert_eq!(kronecker(-1, p as i64), want, "p = {p}");
        assert_eq!(euler_criterion(-1, p), want);
    }
}

#[test]
fn documented_symbols() {
    assert_eq!(kronecker(3, 7), -1);
    assert_eq!(euler_criterion(-7, 3), kronecker(-7, 3));
    assert_eq!(euler_criterion(-3, 7), kronecker(-3, 7));
    for a in -30..30 {
        assert_eq!(kronecker(a, 15), kronecker(a.rem_euclid(15), 15));
    }
}

/// `(c / p)` for a fundamental discriminant `c` coprime to the prime `p`.
fn symbol(c: i64, p: u64) -> i8 {
    if p == 2 {
        if c.rem_euclid(8) == 1 || c.rem_euclid(8) == 7 {
            1
        } else {
            -1
        }
    } else {
        euler_criterion(c, p)
    }
}

#[test]
fn matrix_matches_symbol_oracle() {
    for d in squarefree_range(3000) {
        let (a, ctx) = redei_matrix(d).unwrap();
        let t = ctx.t();
        assert_eq!(a.n(), t);
        // The characters multiply to the discriminant.
        assert_eq!(ctx.characters.iter().product::<i64>(), discriminant(d), "d = {d}");
        for i in 0..t {
            for j in (0..t).filter(|&j| j != i) {
                let want = symbol(ctx.characters[j], ctx.primes[i]) == -1;
                assert_eq!(a.get(i + 1, j + 1), want, "d = {d}, entry ({}, {})", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn primes_divide_the_discriminant() {
    for d in squarefree_range(2000) {
        let (_, ctx) = redei_matrix(d).unwrap();
        let disc = ctx.discriminant;
        assert!(disc.rem_euclid(4) <= 1);
        let mut ps = ctx.primes.clone();
        ps.sort_unstable();
        let want: Vec<u64> = factor(disc.unsigned_abs()).into_iter().map(|(p, _)| p).collect();
        assert_eq!(ps, want, "d = {d}");
    }
}

#[test]
fn reciprocity_holds_everywhere() {
    for d in squarefree_range(10_000) {
        assert!(validate_reciprocity(d).unwrap(), "d = {d}");
    }
}

#[test]
fn rows_sum_to_zero_and_corank_is_positive() {
    for d in squarefree_range(10_000) {
        let (a, _) = redei_matrix(d).unwrap();
        for i in 1..=a.n() {
            assert!(a.row(i).count_ones() % 2 == 0, "d = {d}, row {i}");
        }
        assert!(a.corank() >= 1, "d = {d}");
    }
}

#[test]
fn column_sums_for_odd_discriminants() {
    for d in squarefree_range(10_000).filter(|d| d.rem_euclid(4) == 1) {
        let (a, ctx) = redei_matrix(d).unwrap();
        let cols_zero = (1..=a.n()).all(|j| a.column(j).count_ones() % 2 == 0);
        let k3 = ctx.primes.iter().filter(|&&p| p % 4 == 3).count();
        assert_eq!(cols_zero, k3 % 2 == 1 || k3 == 0, "d = {d}");
        if d < 0 {
            assert!(cols_zero, "d = {d}");
        }
    }
}

#[test]
fn odd_discriminants_land_in_their_pell_space() {
    let mut checked = 0;
    for d in squarefree_range(10_000).filter(|d| d.rem_euclid(4) == 1) {
        for (p, _) in factor(d.unsigned_abs()).into_iter().filter(|(p, _)| p % 4 == 3) {
            let l = if d < 0 { -(p as i64) } else { p as i64 };
            let c = classify_pell(d, l).unwrap();
            assert!(matches!(c.kind, PellKind::Pell1 | PellKind::Pell2));
            assert!(c.constraints_ok, "d = {d}, l = {l}: {c:?}");
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn scan_is_ordered_and_consistent() {
    let rows = scan(300);
    let ds: Vec<i64> = rows.iter().map(|r| r.d).collect();
    let want: Vec<i64> = squarefree_range(300).collect();
    assert_eq!(ds, want);
    assert!(rows.iter().all(|r| r.reciprocity_ok && r.corank >= 1));
}

#[test]
fn input_errors() {
    assert!(redei_matrix(12).is_err());
    assert!(redei_matrix(0).is_err());
    assert!(redei_matrix(1).is_err());
    assert!(classify_pell(15, 5).is_err());
}
