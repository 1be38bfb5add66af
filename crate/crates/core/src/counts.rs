//! Exact overpartition counting.
//!
//! An overpartition of n is a partition of n in which the final occurrence of
//! each distinct part size may be overlined, so the counting function p̄(n)
//! has generating function
//!
//! ```text
//! ∑ p̄(n) qⁿ = ∏_{j≥1} (1 + qʲ)/(1 − qʲ),      p̄(0) = 1.
//! ```
//!
//! Two independent routes are provided:
//!
//! * [`brute_force_count`] expands the generating-function product term by
//!   term — deliberately naive, O(n²) coefficient updates, and kept free of
//!   any recurrence so it can serve as an oracle for the fast path;
//! * [`build_table`] fills a table through a pair of sparse pentagonal-number
//!   recurrences (see below), touching O(√n) earlier entries per index.
//!
//! The fast route factors the product as `P̄(q) = Q(q)/E(q)` with
//! `E(q) = ∏(1 − qʲ) = ∑_k (−1)^k q^{k(3k−1)/2}` (pentagonal number theorem)
//! and `Q(q) = ∏(1 + qʲ)`.  From `Q(q)·E(q) = E(q²)` the distinct-part
//! counts q̄(n) satisfy a sparse recurrence driven by doubled pentagonal
//! numbers, and from `P̄(q)·E(q) = Q(q)` the overpartition counts follow by a
//! second sparse pass.

use rug::Integer;
use std::io::{BufRead, Write};

/// Largest index accepted by the naive oracle; the quadratic expansion is
/// meant for cross-checking small prefixes, not production use.
pub const BRUTE_FORCE_LIMIT: u64 = 40;

/// Errors from table construction, serialization, and validation.
#[derive(Debug, thiserror::Error)]
pub enum CountError {
    /// The naive oracle refuses indices beyond [`BRUTE_FORCE_LIMIT`].
    #[error("brute-force oracle supports n ≤ {BRUTE_FORCE_LIMIT}, got {0}")]
    OracleRange(u64),
    /// Table storage could not be reserved up front.
    #[error("cannot reserve table storage for {0} entries")]
    ResourceExhausted(u64),
    /// Underlying I/O failure while reading or writing a table.
    #[error("table I/O failed: {0}")]
    Io(#[from] std::io::Error),
    /// The CSV header row is not exactly `n,overpartition`.
    #[error("line {line}: bad header {found:?}, expected \"n,overpartition\"")]
    BadHeader { line: usize, found: String },
    /// A data row does not parse as `index,count`.
    #[error("line {line}: malformed row {found:?}")]
    MalformedRow { line: usize, found: String },
    /// Row indices must start at 0 and increase by exactly 1.
    #[error("line {line}: index gap, expected n = {expected}, found {found}")]
    IndexGap {
        line: usize,
        expected: u64,
        found: u64,
    },
    /// The count at index 0 must be 1.
    #[error("line {line}: count at n = 0 must be 1")]
    BadBaseValue { line: usize },
    /// Counts must be strictly increasing for n ≥ 1.
    #[error(
        "line {line}: monotonicity violation, count at n = {n} does not exceed its predecessor"
    )]
    MonotonicityViolation { line: usize, n: u64 },
    /// Counts must be even for n ≥ 1.
    #[error("line {line}: parity violation, count at n = {n} is odd")]
    ParityViolation { line: usize, n: u64 },
    /// The stream contained no rows at all.
    #[error("table stream is empty")]
    Empty,
}

/// Count overpartitions of `n` by expanding `∏ (1+qʲ)/(1−qʲ)` to order `n`.
///
/// Each factor is applied as a full polynomial pass: multiplication by
/// `(1+qʲ)` walks the coefficients downward, multiplication by the geometric
/// series `1/(1−qʲ)` walks them upward.  No pentagonal structure is used
/// anywhere, keeping this an independent oracle for the table recurrences.
pub fn brute_force_count(n: u64) -> Result<Integer, CountError> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(CountError::OracleRange(n));
    }
    let len = n as usize + 1;
    let mut coeff = vec![Integer::new(); len];
    coeff[0] = Integer::from(1);
    for j in 1..=n as usize {
        // × (1 + q^j), highest coefficient first so each source is pre-update.
        for i in (j..len).rev() {
            let add = coeff[i - j].clone();
            coeff[i] += add;
        }
        // × 1/(1 − q^j) = 1 + q^j + q^{2j} + …, lowest first so the carry
        // compounds.
        for i in j..len {
            let add = coeff[i - j].clone();
            coeff[i] += add;
        }
    }
    Ok(coeff.pop().expect("len ≥ 1"))
}

/// Generalized pentagonal numbers `k(3k−1)/2` for `k = 1, −1, 2, −2, …` up
/// to `limit`, paired with the sign `(−1)^(k+1)` their term carries when the
/// pentagonal series is moved to the right-hand side of a recurrence.
fn pentagonal_offsets(limit: u64) -> Vec<(u64, i32)> {
    let mut out = Vec::new();
    let mut k: u64 = 1;
    loop {
        let down = k * (3 * k - 1) / 2;
        let up = k * (3 * k + 1) / 2;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        if down > limit {
            break;
        }
        out.push((down, sign));
        if up <= limit {
            out.push((up, sign));
        }
        k += 1;
    }
    out
}

/// Signed indicator of the doubled pentagonal series `E(q²)`: returns
/// `(−1)^k` when `n = k(3k−1)` for some integer `k`, otherwise 0.
fn doubled_pentagonal_signs(limit: u64) -> Vec<(u64, i32)> {
    let mut out = vec![(0u64, 1i32)];
    for k in 1u64.. {
        let down = k * (3 * k - 1);
        let up = k * (3 * k + 1);
        let sign = if k % 2 == 1 { -1 } else { 1 };
        if down > limit {
            break;
        }
        out.push((down, sign));
        if up <= limit {
            out.push((up, sign));
        }
    }
    out
}

/// Exact table of overpartition counts `p̄(0), …, p̄(max_n)`.
///
/// Invariants (validated on load, guaranteed by construction):
/// * `count(0) = 1`;
/// * counts are strictly increasing for n ≥ 1;
/// * counts are even for n ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverpartitionTable {
    counts: Vec<Integer>,
}

impl OverpartitionTable {
    /// Largest index stored.
    pub fn max_n(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    /// The exact count `p̄(n)`, if `n` is within the table.
    pub fn count(&self, n: u64) -> Option<&Integer> {
        self.counts.get(n as usize)
    }

    /// All counts in index order.
    pub fn counts(&self) -> &[Integer] {
        &self.counts
    }

    /// Serialize as CSV: header `n,overpartition`, one `index,count` row per
    /// index in ascending order, LF line endings.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<(), CountError> {
        sink.write_all(b"n,overpartition\n")?;
        for (n, c) in self.counts.iter().enumerate() {
            writeln!(sink, "{n},{c}")?;
        }
        Ok(())
    }

    /// Parse and validate a CSV stream produced by [`OverpartitionTable::save`].
    ///
    /// Every structural invariant is checked; violations name the offending
    /// line (1-based, counting the header).
    pub fn load<R: BufRead>(source: R) -> Result<Self, CountError> {
        let mut lines = source.lines();
        let header = match lines.next() {
            None => return Err(CountError::Empty),
            Some(h) => h?,
        };
        if header.trim_end_matches('\r') != "n,overpartition" {
            return Err(CountError::BadHeader {
                line: 1,
                found: header,
            });
        }
        let mut counts: Vec<Integer> = Vec::new();
        for (idx, row) in lines.enumerate() {
            let line = idx + 2;
            let row = row?;
            let trimmed = row.trim_end_matches('\r');
            if trimmed.is_empty() {
                continue;
            }
            let Some((ns, cs)) = trimmed.split_once(',') else {
                return Err(CountError::MalformedRow {
                    line,
                    found: trimmed.to_owned(),
                });
            };
            let n: u64 = ns.parse().map_err(|_| CountError::MalformedRow {
                line,
                found: trimmed.to_owned(),
            })?;
            let c =
                Integer::parse(cs)
                    .map(Integer::from)
                    .map_err(|_| CountError::MalformedRow {
                        line,
                        found: trimmed.to_owned(),
                    })?;
            let expected = counts.len() as u64;
            if n != expected {
                return Err(CountError::IndexGap {
                    line,
                    expected,
                    found: n,
                });
            }
            if n == 0 {
                if c != 1 {
                    return Err(CountError::BadBaseValue { line });
                }
            } else {
                if c <= counts[n as usize - 1] {
                    return Err(CountError::MonotonicityViolation { line, n });
                }
                if c.is_odd() {
                    return Err(CountError::ParityViolation { line, n });
                }
            }
            counts.push(c);
        }
        if counts.is_empty() {
            return Err(CountError::Empty);
        }
        Ok(OverpartitionTable { counts })
    }
}

/// Build the exact table `p̄(0..=max_n)` by the two-stage pentagonal
/// recurrence.
///
/// Stage 1 (distinct-part counts, from `Q(q)·E(q) = E(q²)`):
///
/// ```text
/// q̄(n) = e₂(n) + ∑_{k≠0} (−1)^(k+1) q̄(n − k(3k−1)/2)
/// ```
///
/// where `e₂(n) = (−1)^k` if `n = k(3k−1)` and 0 otherwise.
///
/// Stage 2 (overpartition counts, from `P̄(q)·E(q) = Q(q)`):
///
/// ```text
/// p̄(n) = q̄(n) + ∑_{k≠0} (−1)^(k+1) p̄(n − k(3k−1)/2)
/// ```
///
/// Both stages are O(n√n) big-integer additions in total and evaluate in
/// strict index order, so the output is deterministic.
pub fn build_table(max_n: u64) -> Result<OverpartitionTable, CountError> {
    let len = usize::try_from(max_n + 1).map_err(|_| CountError::ResourceExhausted(max_n))?;
    let offsets = pentagonal_offsets(max_n);
    let mut doubled = doubled_pentagonal_signs(max_n).into_iter().peekable();

    let mut distinct: Vec<Integer> = Vec::new();
    distinct
        .try_reserve_exact(len)
        .map_err(|_| CountError::ResourceExhausted(max_n))?;
    for n in 0..=max_n {
        let mut value = Integer::new();
        if let Some(&(idx, sign)) = doubled.peek() {
            if idx == n {
                value += sign;
                doubled.next();
            }
        }
        for &(g, sign) in &offsets {
            if g > n {
                break;
            }
            let prev = &distinct[(n - g) as usize];
            if sign > 0 {
                value += prev;
            } else {
                value -= prev;
            }
        }
        distinct.push(value);
    }

    let mut counts: Vec<Integer> = Vec::new();
    counts
        .try_reserve_exact(len)
        .map_err(|_| CountError::ResourceExhausted(max_n))?;
    for n in 0..=max_n {
        let mut value = distinct[n as usize].clone();
        for &(g, sign) in &offsets {
            if g > n {
                break;
            }
            let prev = &counts[(n - g) as usize];
            if sign > 0 {
                value += prev;
            } else {
                value -= prev;
            }
        }
        counts.push(value);
    }

    let table = OverpartitionTable { counts };
    debug_assert_eq!(table.count(0), Some(&Integer::from(1)));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_counts_match_known_values() {
        // 1, 2, 4, 8, 14, 24, 40, 64, 100, 154, 232: the 8 overpartitions of
        // 3 are 3, 3̄, 2+1, 2̄+1, 2+1̄, 2̄+1̄, 1+1+1, 1̄+1+1.
        let expected: [u32; 11] = [1, 2, 4, 8, 14, 24, 40, 64, 100, 154, 232];
        let table = build_table(10).unwrap();
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(
                table.count(n as u64).unwrap(),
                &Integer::from(*e),
                "n = {n}"
            );
            assert_eq!(brute_force_count(n as u64).unwrap(), Integer::from(*e));
        }
    }

    #[test]
    fn oracle_rejects_large_indices() {
        assert!(brute_force_count(BRUTE_FORCE_LIMIT).is_ok());
        assert!(matches!(
            brute_force_count(BRUTE_FORCE_LIMIT + 1),
            Err(CountError::OracleRange(_))
        ));
    }

    #[test]
    fn table_agrees_with_oracle_through_limit() {
        let table = build_table(BRUTE_FORCE_LIMIT).unwrap();
        for n in 0..=BRUTE_FORCE_LIMIT {
            assert_eq!(
                table.count(n).unwrap(),
                &brute_force_count(n).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn invariants_hold_on_a_longer_prefix() {
        let table = build_table(500).unwrap();
        assert_eq!(table.count(0).unwrap(), &Integer::from(1));
        for n in 1..=500 {
            let c = table.count(n).unwrap();
            assert!(c > table.count(n - 1).unwrap(), "not increasing at {n}");
            assert!(c.is_even(), "odd count at {n}");
        }
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let table = build_table(64).unwrap();
        let mut buf = Vec::new();
        table.save(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,overpartition\n0,1\n1,2\n2,4\n3,8\n"));
        assert!(!text.contains('\r'));
        let reloaded = OverpartitionTable::load(&buf[..]).unwrap();
        assert_eq!(reloaded, table);
    }

    #[test]
    fn build_is_deterministic() {
        let mut a = Vec::new();
        build_table(200).unwrap().save(&mut a).unwrap();
        let mut b = Vec::new();
        build_table(200).unwrap().save(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn load_rejects_structural_violations() {
        type ErrorCheck = fn(&CountError) -> bool;
        let cases: [(&str, ErrorCheck); 6] = [
            ("x,overpartition\n0,1\n", |e| {
                matches!(e, CountError::BadHeader { line: 1, .. })
            }),
            ("n,overpartition\n0,1\n1,two\n", |e| {
                matches!(e, CountError::MalformedRow { line: 3, .. })
            }),
            ("n,overpartition\n0,1\n2,4\n", |e| {
                matches!(
                    e,
                    CountError::IndexGap {
                        line: 3,
                        expected: 1,
                        found: 2
                    }
                )
            }),
            ("n,overpartition\n0,2\n", |e| {
                matches!(e, CountError::BadBaseValue { line: 2 })
            }),
            ("n,overpartition\n0,1\n1,2\n2,2\n", |e| {
                matches!(e, CountError::MonotonicityViolation { line: 4, n: 2 })
            }),
            ("n,overpartition\n0,1\n1,2\n2,3\n", |e| {
                matches!(e, CountError::ParityViolation { line: 4, n: 2 })
            }),
        ];
        for (input, check) in cases {
            let err = OverpartitionTable::load(input.as_bytes()).unwrap_err();
            assert!(check(&err), "input {input:?} gave {err:?}");
        }
        let parity =
            OverpartitionTable::load("n,overpartition\n0,1\n1,2\n2,3\n".as_bytes()).unwrap_err();
        assert!(parity.to_string().contains("parity violation"));
        assert!(matches!(
            OverpartitionTable::load("".as_bytes()).unwrap_err(),
            CountError::Empty
        ));
    }
}
