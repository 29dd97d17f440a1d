use proptest::prelude::*;

use airic::air::{build_air, euclid_chain, partitions, AirMatrix, Interval, Submatrix};
use airic::codec::{
    complexity_stats, decode_plan_for, encode, oracle_decode, plan_decode, split_index, verify_lemma1,
    verify_lemma1_rowwise, DecodeCase, MessageVector, OracleDecoder,
};
use airic::distances::{down_distance, down_distance_scan, tau_distances, tau_distances_scan, up_distance, up_distance_scan};
use airic::field::PrimeField;
use airic::formats::{parse_plan_text, plan_lines, plan_to_text};
use airic::rates::{canonical_pair, in_s, monotonicity_check, search_best_pair, RatePair, SniProblem};
use airic::sim::{run, side_info_view, DecoderChoice, MessageBatch, SimConfig};

/// Dense reference construction: stack identities while the block is tall,
/// place them side by side while it is wide, and recurse on the remainder.
fn reference_air(m: usize, n: usize) -> Vec<Vec<u8>> {
    let mut a = vec![vec![0u8; n]; m];
    let (mut row0, mut col0, mut rows, mut cols) = (0, 0, m, n);
    while rows > 0 && cols > 0 {
        if rows >= cols {
            let q = rows / cols;
            for block in 0..q {
                for i in 0..cols {
                    a[row0 + block * cols + i][col0 + i] = 1;
                }
            }
            row0 += q * cols;
            rows -= q * cols;
        } else {
            let q = cols / rows;
            for block in 0..q {
                for i in 0..rows {
                    a[row0 + i][col0 + block * rows + i] = 1;
                }
            }
            col0 += q * rows;
            cols -= q * rows;
        }
    }
    a
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=160).prop_flat_map(|m| (Just(m), 1..=m))
}

/// A random achievable instance with a small matrix.
fn instance() -> impl Strategy<Value = (SniProblem, RatePair)> {
    (3usize..=24, 1usize..=6)
        .prop_flat_map(|(k, b)| (Just(k), Just(b), 1..k - 1))
        .prop_flat_map(|(k, b, d)| (Just(k), Just(b), Just(d), 0..=b * (k - d - 1)))
        .prop_filter_map("pair must be achievable for U = 1", |(k, b, d, a)| {
            let p = SniProblem::new(k, d, 1).ok()?;
            in_s(&p, a, b).then_some((k, d, a, b))
        })
        .prop_flat_map(|(k, d, a, b)| {
            let top = (1..=d.min(k - d - 1))
                .filter(|&u| in_s(&SniProblem::new(k, d, u).unwrap(), a, b))
                .max()
                .unwrap();
            (Just(k), Just(d), Just(a), Just(b), 1..=top)
        })
        .prop_map(|(k, d, a, b, u)| {
            let p = SniProblem::new(k, d, u).unwrap();
            (p, RatePair::new(&p, a, b).unwrap())
        })
}

/// `(K, D, U)` with `1 <= U <= D` and `U + D < K`.
fn problem_params(k_max: usize, d_max: usize) -> impl Strategy<Value = (usize, usize, usize)> {
    (3..=k_max)
        .prop_flat_map(move |k| (Just(k), 1..=d_max.min(k - 2)))
        .prop_flat_map(|(k, d)| (Just(k), Just(d), 1..=d.min(k - d - 1)))
}

fn covers(parts: &[Interval], whole: Interval) -> bool {
    let mut pieces: Vec<&Interval> = parts.iter().filter(|i| !i.is_empty()).collect();
    pieces.sort_by_key(|i| i.start);
    let mut at = whole.start;
    for p in pieces {
        if p.start != at {
            return false;
        }
        at = p.end;
    }
    at == whole.end
}

fn rank_of(air: &AirMatrix, rows: &[usize], field: PrimeField) -> usize {
    air.to_matrix(field).select_rows(rows).rank_dense()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_recursion_holds((m, n) in dims()) {
        let ch = euclid_chain(m, n).unwrap();
        let l = ch.l();
        prop_assert_eq!(ch.lambda(-1), n);
        prop_assert_eq!(ch.lambda(0), m - n);
        for i in -1..l - 1 {
            prop_assert_eq!(ch.lambda(i), ch.beta(i + 1) * ch.lambda(i + 1) + ch.lambda(i + 2));
        }
        for i in 1..=l {
            prop_assert!(ch.lambda(i) < ch.lambda(i - 1));
            prop_assert!(ch.beta(i) >= 1);
        }
        for i in -1..=l {
            prop_assert!(ch.lambda(i) > 0 || (i == 0 && m == n));
        }
        prop_assert_eq!(ch.gcd(), num_integer::gcd(m, n));
    }

    #[test]
    fn construction_matches_reference((m, n) in dims()) {
        let air = build_air(m, n).unwrap();
        let reference = reference_air(m, n);
        for (j, row) in reference.iter().enumerate() {
            let cols: Vec<u32> = (0..n as u32).filter(|&c| row[c as usize] == 1).collect();
            prop_assert_eq!(air.row_support(j), &cols[..]);
        }
        for k in 0..n {
            prop_assert_eq!(air.col_support(k)[0] as usize, k);
        }
    }

    #[test]
    fn layout_regions_tile_the_matrix((m, n) in dims()) {
        let air = build_air(m, n).unwrap();
        let mut seen = vec![vec![false; n]; m];
        for sub in air.submatrices() {
            let (rows, cols) = air.region(sub).unwrap();
            for j in rows.clone() {
                for k in cols.clone() {
                    prop_assert!(!seen[j][k]);
                    seen[j][k] = true;
                    let cell = air.locate(j, k).unwrap();
                    prop_assert_eq!(cell.submatrix, sub);
                    prop_assert!(cell.j_r < rows.len() && cell.k_r < cols.len());
                }
            }
        }
        for (j, row) in seen.iter().enumerate() {
            for &k in air.row_support(j) {
                prop_assert!(row[k as usize]);
            }
        }
    }

    #[test]
    fn partitions_cover_their_ranges((m, n) in dims()) {
        let ch = euclid_chain(m, n).unwrap();
        let p = partitions(&ch);
        prop_assert!(covers(&p.r, Interval::inclusive(0, m - 1)));
        prop_assert!(covers(&p.c, Interval::inclusive(0, n - 1)));
        let lambda0 = m - n;
        if lambda0 > 0 {
            prop_assert!(covers(&p.c_tilde, Interval::new(lambda0 as i64, m as i64)));
        }
        for i in 0..p.c_tilde.len() {
            let (d, e) = (p.d_tilde[i], p.e_tilde[i]);
            prop_assert!(covers(&[d, e], p.c_tilde[i]));
            prop_assert!(d.is_empty() || e.is_empty() || d.end <= e.start);
        }
    }

    #[test]
    fn text_format_round_trips((m, n) in dims()) {
        let air = build_air(m, n).unwrap();
        prop_assert_eq!(AirMatrix::parse_text(&air.to_text()).unwrap(), air);
    }

    #[test]
    fn distances_match_scans((m, n) in (2usize..=400).prop_flat_map(|m| (Just(m), 1..m))) {
        let air = build_air(m, n).unwrap();
        for k in 0..n {
            prop_assert_eq!(down_distance(&air, k), down_distance_scan(&air, k));
            for &j in air.col_support(k).iter().skip(1) {
                prop_assert_eq!(up_distance(&air, j as usize, k), up_distance_scan(&air, j as usize, k));
            }
        }
        for k in 0..n - air.chain().gcd() {
            prop_assert_eq!(tau_distances(&air, k), tau_distances_scan(&air, k));
        }
    }

    #[test]
    fn membership_is_monotone_in_u(k in 4usize..=60, d in 1usize..=10, b in 1usize..=12) {
        prop_assume!(d >= 2 && d + 2 < k);
        prop_assert!(monotonicity_check(k, d, 1, 2, b).unwrap());
    }

    #[test]
    fn search_never_loses_to_the_canonical_pair((k, d, u) in problem_params(80, 12)) {
        let p = SniProblem::new(k, d, u).unwrap();
        let canonical = canonical_pair(&p);
        let best = search_best_pair(&p, canonical.b()).unwrap();
        prop_assert!(best.rate() <= canonical.rate());
        prop_assert!(in_s(&p, best.a(), best.b()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cyclic_windows_are_independent((m, n) in (1usize..=48).prop_flat_map(|m| (Just(m), 1..=m))) {
        let air = build_air(m, n).unwrap();
        for p in [2, 3] {
            let f = PrimeField::new(p).unwrap();
            for k in 0..m {
                let rows: Vec<usize> = (0..n).map(|i| (k + i) % m).collect();
                prop_assert_eq!(rank_of(&air, &rows, f), n);
            }
        }
    }

    #[test]
    fn rows_leave_the_span_of_their_neighbourhood((m, n) in (2usize..=40).prop_flat_map(|m| (Just(m), 1..=m))) {
        let air = build_air(m, n).unwrap();
        let g = air.chain().gcd();
        let l = air.to_matrix(PrimeField::default());
        for k in 0..m {
            let others: Vec<usize> = (1..g)
                .map(|i| (k + m - i) % m)
                .chain((1..n).map(|i| (k + i) % m))
                .filter(|&r| r != k)
                .collect();
            prop_assert!(!l.select_rows(&others).in_row_span(l.row(k)).unwrap(), "({m},{n}) row {k}");
        }
    }

    #[test]
    fn plans_respect_side_information((p, pair) in instance()) {
        let air = build_air(pair.m(), pair.n()).unwrap();
        let b = pair.b();
        let plan = decode_plan_for(&air, &p, b).unwrap();
        prop_assert_eq!(plan.entries().len(), pair.m());
        for (k, e) in plan.entries().iter().enumerate() {
            prop_assert_eq!(split_index(b, k), (e.t, e.j));
            for &s in &e.side_terms {
                prop_assert!(p.is_side_info(e.t, s / b));
            }
            let mut parity = vec![0u8; pair.m()];
            for &c in &e.codes {
                for &r in air.col_support(c) {
                    parity[r as usize] ^= 1;
                }
            }
            let odd: Vec<usize> = (0..pair.m()).filter(|&r| parity[r] == 1 && r != k).collect();
            prop_assert_eq!(parity[k], 1);
            prop_assert_eq!(&odd, &e.side_terms);
            let expected_codes = match e.case {
                DecodeCase::I | DecodeCase::IV => 1,
                DecodeCase::II => 2,
                DecodeCase::III => e.codes.len().max(2),
            };
            prop_assert_eq!(e.codes.len(), expected_codes);
        }
        for s in complexity_stats(&plan, &air) {
            prop_assert_eq!(s.gamma, s.gamma_formula);
        }
        prop_assert_eq!(parse_plan_text(&plan_to_text(&plan)).unwrap(), plan_lines(&plan));
    }

    #[test]
    fn decoders_recover_random_messages((p, pair) in instance(), seed in any::<u64>()) {
        let air = build_air(pair.m(), pair.n()).unwrap();
        let b = pair.b();
        let plan = decode_plan_for(&air, &p, b).unwrap();
        for q in [2, 3, 5] {
            let f = PrimeField::new(q).unwrap();
            prop_assert!(verify_lemma1(&air, &p, b, f).unwrap());
            let x = MessageBatch::sample(p.k(), b, f, 1, seed).unwrap().trial(0);
            let y = encode(&air, &x).unwrap();
            let oracle = OracleDecoder::new(&air, &p, b, f).unwrap();
            let dense = air.to_matrix(f);
            for t in 0..p.k() {
                let side = side_info_view(&x, &p, t).unwrap();
                let want: Vec<u32> = (1..=b).map(|j| x.get(t, j)).collect();
                prop_assert_eq!(&oracle.decode(&y, &side).unwrap(), &want);
                if pair.m() <= 60 {
                    prop_assert_eq!(&oracle_decode(&dense, &y, &side).unwrap(), &want);
                }
                if q == 2 {
                    for j in 1..=b {
                        prop_assert_eq!(plan_decode(&plan, &y, &side, t, j).unwrap(), x.get(t, j));
                    }
                }
            }
        }
    }

    #[test]
    fn fast_and_literal_checks_agree(
        (k, d, u, a, b) in (problem_params(9, 4), 1usize..=3)
            .prop_flat_map(|((k, d, u), b)| (Just(k), Just(d), Just(u), 0..=b * (k - d - 1), Just(b)))
    ) {
        let p = SniProblem::new(k, d, u).unwrap();
        let air = build_air(k * b, b * (d + 1) + a).unwrap();
        for q in [2, 3] {
            let f = PrimeField::new(q).unwrap();
            prop_assert_eq!(verify_lemma1(&air, &p, b, f).unwrap(), verify_lemma1_rowwise(&air, &p, b, f).unwrap());
        }
        if in_s(&p, a, b) {
            prop_assert!(verify_lemma1(&air, &p, b, PrimeField::default()).unwrap());
        }
    }

    #[test]
    fn side_view_exposes_exactly_the_complement(
        (k, d, u, t) in problem_params(30, 10).prop_flat_map(|(k, d, u)| (Just(k), Just(d), Just(u), 0..k))
    ) {
        let p = SniProblem::new(k, d, u).unwrap();
        let x = MessageVector::zeros(k, 2, PrimeField::default());
        let view = side_info_view(&x, &p, t).unwrap();
        let window: Vec<usize> = (0..=u + d).map(|i| (t + k - u + i) % k).collect();
        for s in 0..k {
            let known = view.get(s, 1).is_ok() && view.get(s, 2).is_ok();
            prop_assert_eq!(known, !window.contains(&s));
        }
        prop_assert!(view.get(0, 3).is_err());
    }

    #[test]
    fn simulation_is_reproducible((p, pair) in instance(), seed in any::<u64>()) {
        let cfg = SimConfig::new(p, pair, 8, seed, PrimeField::default(), DecoderChoice::Both).unwrap();
        let report = run(&cfg).unwrap();
        prop_assert!(report.is_clean());
        prop_assert_eq!(&report, &run(&cfg).unwrap());
    }
}

#[test]
fn sim_spec_examples() {
    let p = SniProblem::new(71, 4, 1).unwrap();
    let pair = RatePair::new(&p, 1, 14).unwrap();
    let cfg = SimConfig::new(p, pair, 10, 0, PrimeField::default(), DecoderChoice::Both).unwrap();
    let report = run(&cfg).unwrap();
    assert!(report.failures.is_empty());
    assert_eq!(report.disagreements, 0);

    let p = SniProblem::new(13, 4, 3).unwrap();
    assert!(RatePair::new(&p, 1, 5).is_err());
}

#[test]
fn audit_log_records_only_side_information() {
    let p = SniProblem::new(13, 4, 1).unwrap();
    let pair = RatePair::new(&p, 1, 5).unwrap();
    let air = build_air(pair.m(), pair.n()).unwrap();
    let plan = decode_plan_for(&air, &p, 5).unwrap();
    let x = MessageBatch::sample(13, 5, PrimeField::default(), 1, 3).unwrap().trial(0);
    let y = encode(&air, &x).unwrap();
    for t in 0..13 {
        let side = side_info_view(&x, &p, t).unwrap().with_audit();
        for j in 1..=5 {
            plan_decode(&plan, &y, &side, t, j).unwrap();
        }
        assert!(side.accesses().iter().all(|&(s, _)| p.is_side_info(t, s)));
        assert!(!side.accesses().is_empty());
    }
}

#[test]
fn square_matrices_are_identities() {
    for n in 1..=30 {
        let air = build_air(n, n).unwrap();
        assert_eq!(air.submatrices(), vec![Submatrix::TopIdentity]);
        assert_eq!(air.nnz(), n);
    }
}
