//! Exact restricted partition counts.
//!
//! p_A(n) is the number of multisets of elements of a part set A summing
//! to n; its generating series is prod_{l in A} 1/(1 - z^l). Counts are
//! computed by the standard coin-style dynamic program with
//! arbitrary-precision integers — the asymptotic comparisons need exact
//! values (p_S(2*10^4) has ~90 digits).
//!
//! The cross-check machinery lives here too: an exponential enumeration
//! oracle for small n, and Euler's pentagonal-number recurrence for the
//! unrestricted partition function.

use std::io::{self, BufRead, Read, Write};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::twosquares::{sieve_membership, MembershipTable};

/// Default cap on the DP size; keeps a full comparison run in seconds.
pub const DEFAULT_NMAX_CAP: u64 = 50_000;

/// A set of allowed parts (positive integers).
#[derive(Debug, Clone)]
pub struct PartSet {
    kind: PartSetKind,
    id: String,
}

#[derive(Debug, Clone)]
enum PartSetKind {
    /// Flagged members of a membership table.
    Members(MembershipTable),
    /// All positive integers.
    All,
    /// An explicit strictly increasing list.
    Explicit(Vec<u64>),
}

impl PartSet {
    /// The set S of sums of two squares up to `limit` (sieved here).
    pub fn two_squares(limit: u64) -> Result<PartSet> {
        Ok(PartSet {
            kind: PartSetKind::Members(sieve_membership(limit.max(1))?),
            id: "twosquares".into(),
        })
    }

    /// Parts flagged in an existing membership table.
    pub fn from_membership(table: MembershipTable, id: impl Into<String>) -> PartSet {
        PartSet {
            kind: PartSetKind::Members(table),
            id: id.into(),
        }
    }

    /// All positive integers (the unrestricted partition function).
    pub fn all() -> PartSet {
        PartSet {
            kind: PartSetKind::All,
            id: "all".into(),
        }
    }

    /// An explicit part list; must be strictly increasing and free of 0.
    pub fn explicit(parts: Vec<u64>) -> Result<PartSet> {
        if parts.first() == Some(&0) {
            return Err(Error::InvalidInput("part sets may not contain 0".into()));
        }
        if parts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "explicit part list must be strictly increasing".into(),
            ));
        }
        Ok(PartSet {
            kind: PartSetKind::Explicit(parts),
            id: "explicit".into(),
        })
    }

    /// Parses the newline-delimited decimal part-set file format.
    pub fn from_list_reader<R: Read>(r: R, id: impl Into<String>) -> Result<PartSet> {
        let mut parts = Vec::new();
        for (lineno, line) in io::BufReader::new(r).lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let value: u64 = trimmed.parse().map_err(|_| {
                Error::InvalidInput(format!(
                    "part-set file line {}: not a decimal integer: {trimmed:?}",
                    lineno + 1
                ))
            })?;
            parts.push(value);
        }
        let mut set = PartSet::explicit(parts)?;
        set.id = id.into();
        Ok(set)
    }

    /// Identifier recorded in tables built from this set.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// The parts not exceeding `n_max`, ascending.
    pub fn parts_up_to(&self, n_max: u64) -> Result<Vec<u64>> {
        match &self.kind {
            PartSetKind::Members(table) => {
                if table.limit() < n_max {
                    return Err(Error::TableTooSmall {
                        needed: n_max,
                        available: table.limit(),
                    });
                }
                Ok(table.member_list_up_to(n_max))
            }
            PartSetKind::All => Ok((1..=n_max).collect()),
            PartSetKind::Explicit(parts) => {
                Ok(parts.iter().copied().take_while(|&p| p <= n_max).collect())
            }
        }
    }
}

/// Exact counts p(0..=n_max) for one part set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    n_max: u64,
    set_id: String,
    counts: Vec<BigUint>,
}

impl PartitionTable {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn set_id(&self) -> &str {
        &self.set_id
    }

    /// The exact count at `n`; errors if `n` exceeds the table.
    pub fn count(&self, n: u64) -> Result<&BigUint> {
        self.counts.get(n as usize).ok_or_else(|| {
            Error::InvalidInput(format!("n = {n} outside table range 0..={}", self.n_max))
        })
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Writes the table as CSV with header `n,count`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "n,count")?;
        for (n, c) in self.counts.iter().enumerate() {
            writeln!(w, "{n},{c}")?;
        }
        Ok(())
    }

    /// Compact binary form: magic, length-prefixed set id, record count,
    /// then each count as a u32 little-endian byte length followed by the
    /// little-endian magnitude bytes.
    pub fn write_binary<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"SQPTBL01")?;
        let id = self.set_id.as_bytes();
        w.write_all(&(id.len() as u64).to_le_bytes())?;
        w.write_all(id)?;
        w.write_all(&(self.counts.len() as u64).to_le_bytes())?;
        for c in &self.counts {
            let bytes = c.to_bytes_le();
            w.write_all(&(bytes.len() as u32).to_le_bytes())?;
            w.write_all(&bytes)?;
        }
        Ok(())
    }

    /// Reads a table written by [`PartitionTable::write_binary`].
    pub fn read_binary<R: Read>(r: &mut R) -> Result<PartitionTable> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != b"SQPTBL01" {
            return Err(Error::InvalidInput("not a partition table file".into()));
        }
        let mut u64buf = [0u8; 8];
        r.read_exact(&mut u64buf)?;
        let id_len = u64::from_le_bytes(u64buf) as usize;
        if id_len > 4096 {
            return Err(Error::InvalidInput("unreasonable set id length".into()));
        }
        let mut id_bytes = vec![0u8; id_len];
        r.read_exact(&mut id_bytes)?;
        let set_id = String::from_utf8(id_bytes)
            .map_err(|_| Error::InvalidInput("set id is not UTF-8".into()))?;
        r.read_exact(&mut u64buf)?;
        let records = u64::from_le_bytes(u64buf);
        if records == 0 {
            return Err(Error::InvalidInput("empty partition table file".into()));
        }
        let mut counts = Vec::with_capacity(records as usize);
        let mut u32buf = [0u8; 4];
        for _ in 0..records {
            r.read_exact(&mut u32buf)?;
            let len = u32::from_le_bytes(u32buf) as usize;
            let mut bytes = vec![0u8; len];
            r.read_exact(&mut bytes)?;
            counts.push(BigUint::from_bytes_le(&bytes));
        }
        Ok(PartitionTable {
            n_max: records - 1,
            set_id,
            counts,
        })
    }
}

/// Counts p(0..=n_max) for the given part set by the coin DP: for each
/// part l in increasing order, `counts[m] += counts[m - l]` for
/// m = l..n_max. Deterministic and exact.
pub fn partition_counts(n_max: u64, parts: &PartSet) -> Result<PartitionTable> {
    partition_counts_capped(n_max, parts, DEFAULT_NMAX_CAP)
}

/// [`partition_counts`] with an explicit cap on `n_max`.
pub fn partition_counts_capped(n_max: u64, parts: &PartSet, cap: u64) -> Result<PartitionTable> {
    if n_max > cap {
        return Err(Error::ResourceLimit(format!(
            "n_max = {n_max} exceeds cap {cap}"
        )));
    }
    let part_list = parts.parts_up_to(n_max)?;
    let mut counts = vec![BigUint::zero(); (n_max + 1) as usize];
    counts[0] = BigUint::one();
    for &part in &part_list {
        for m in part as usize..counts.len() {
            let (lo, hi) = counts.split_at_mut(m);
            hi[0] += &lo[m - part as usize];
        }
    }
    Ok(PartitionTable {
        n_max,
        set_id: parts.id().to_string(),
        counts,
    })
}

/// p(n) at a single index; convenience wrapper over [`partition_counts`].
pub fn partition_count(n: u64, parts: &PartSet) -> Result<BigUint> {
    let table = partition_counts(n, parts)?;
    Ok(table.counts[n as usize].clone())
}

/// `counts[n+1] - counts[n]` as a signed big integer (non-negative
/// whenever 1 is a part).
pub fn difference_exact(n: u64, table: &PartitionTable) -> Result<BigInt> {
    if n + 1 > table.n_max {
        return Err(Error::InvalidInput(format!(
            "difference at n = {n} needs counts up to {} but table stops at {}",
            n + 1,
            table.n_max
        )));
    }
    let a = BigInt::from(table.counts[(n + 1) as usize].clone());
    let b = BigInt::from(table.counts[n as usize].clone());
    Ok(a - b)
}

/// Counts partitions of n by explicit backtracking over non-increasing
/// part sequences. Exponential; the independent oracle for the DP.
pub fn enumeration_oracle(n: u64, parts: &PartSet) -> Result<u64> {
    if n > 40 {
        return Err(Error::InvalidInput(format!(
            "enumeration oracle is capped at n <= 40, got {n}"
        )));
    }
    if n == 0 {
        return Ok(1);
    }
    let list = parts.parts_up_to(n)?;
    fn rec(remaining: u64, max_idx: usize, parts: &[u64]) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        for i in (0..=max_idx).rev() {
            if parts[i] <= remaining {
                total += rec(remaining - parts[i], i, parts);
            }
        }
        total
    }
    if list.is_empty() {
        return Ok(0);
    }
    Ok(rec(n, list.len() - 1, &list))
}

/// Unrestricted partition numbers p(0..=n_max) by Euler's pentagonal
/// recurrence p(n) = sum_k (-1)^{k+1} [p(n - k(3k-1)/2) + p(n - k(3k+1)/2)].
/// Independent of the DP path; used to cross-check it.
pub fn pentagonal_partition_counts(n_max: u64) -> Vec<BigUint> {
    let n_max = n_max as usize;
    let mut p = vec![BigUint::zero(); n_max + 1];
    p[0] = BigUint::one();
    for n in 1..=n_max {
        let mut positive = BigUint::zero();
        let mut negative = BigUint::zero();
        let mut k = 1usize;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let acc = if k % 2 == 1 {
                &mut positive
            } else {
                &mut negative
            };
            *acc += &p[n - g1];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                let acc = if k % 2 == 1 {
                    &mut positive
                } else {
                    &mut negative
                };
                *acc += &p[n - g2];
            }
            k += 1;
        }
        // p(n) >= 0, so the positive branch dominates.
        p[n] = positive - negative;
    }
    p
}

/// Natural log of a positive big integer: log of the top 64 significant
/// bits plus bit-length scaling, accurate to ~1e-15 relative. Returns
/// -inf for zero.
pub fn log_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 64 {
        let limbs = v.to_u64_digits();
        (limbs[0] as f64).ln()
    } else {
        let shift = bits - 64;
        let top: BigUint = v >> shift;
        let top = top.to_u64_digits()[0];
        (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_s(limit: u64) -> PartSet {
        PartSet::two_squares(limit).unwrap()
    }

    fn odds(limit: u64) -> PartSet {
        PartSet::explicit((1..=limit).step_by(2).collect()).unwrap()
    }

    #[test]
    fn dp_small_examples() {
        let t = partition_counts(4, &set_s(4)).unwrap();
        let got: Vec<u64> = t.counts().iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(got, vec![1, 1, 2, 2, 4]);

        let t0 = partition_counts(0, &PartSet::all()).unwrap();
        assert_eq!(t0.counts().len(), 1);
        assert!(t0.count(0).unwrap().is_one());
    }

    #[test]
    fn unrestricted_p100() {
        let t = partition_counts(100, &PartSet::all()).unwrap();
        assert_eq!(t.count(100).unwrap(), &BigUint::from(190_569_292u64));
    }

    #[test]
    fn single_index_wrapper() {
        assert_eq!(partition_count(3, &set_s(3)).unwrap(), BigUint::from(2u32));
        assert_eq!(partition_count(1, &set_s(1)).unwrap(), BigUint::from(1u32));
        // Frozen from the enumeration oracle.
        assert_eq!(
            partition_count(7, &set_s(7)).unwrap(),
            BigUint::from(enumeration_oracle(7, &set_s(7)).unwrap())
        );
    }

    #[test]
    fn difference_examples() {
        let t = partition_counts(4, &set_s(4)).unwrap();
        assert_eq!(difference_exact(3, &t).unwrap(), BigInt::from(2));
        assert_eq!(difference_exact(0, &t).unwrap(), BigInt::from(0));
        assert!(matches!(
            difference_exact(4, &t),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn difference_self_consistency_large() {
        let t = partition_counts(600, &set_s(600)).unwrap();
        let d = difference_exact(599, &t).unwrap();
        let a = partition_count(600, &set_s(600)).unwrap();
        let b = partition_count(599, &set_s(599)).unwrap();
        assert_eq!(d, BigInt::from(a) - BigInt::from(b));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(enumeration_oracle(4, &set_s(4)).unwrap(), 4);
        assert_eq!(enumeration_oracle(0, &PartSet::all()).unwrap(), 1);
        // Evens halve: partitions of 10 into even parts = p(5) = 7.
        let evens = PartSet::explicit((2..=10).step_by(2).collect()).unwrap();
        assert_eq!(enumeration_oracle(10, &evens).unwrap(), 7);
        assert!(matches!(
            enumeration_oracle(41, &PartSet::all()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn dp_matches_oracle_across_sets() {
        let sets = [set_s(40), PartSet::all(), odds(40)];
        for set in &sets {
            let table = partition_counts(40, set).unwrap();
            for n in 0..=40u64 {
                let expected = enumeration_oracle(n, set).unwrap();
                assert_eq!(
                    table.count(n).unwrap(),
                    &BigUint::from(expected),
                    "set {} at n = {n}",
                    set.id()
                );
            }
        }
    }

    #[test]
    fn dp_is_order_independent() {
        // Processing parts in any order yields the same table.
        let parts = vec![1u64, 2, 4, 5, 8, 9, 10];
        let reference = partition_counts(12, &PartSet::explicit(parts.clone()).unwrap()).unwrap();
        let mut permuted = parts.clone();
        permuted.reverse();
        permuted.swap(1, 3);
        let mut counts = vec![BigUint::zero(); 13];
        counts[0] = BigUint::one();
        for &part in &permuted {
            for m in part as usize..counts.len() {
                let (lo, hi) = counts.split_at_mut(m);
                hi[0] += &lo[m - part as usize];
            }
        }
        assert_eq!(counts, reference.counts().to_vec());
    }

    #[test]
    fn pentagonal_matches_dp() {
        let dp = partition_counts(300, &PartSet::all()).unwrap();
        let pent = pentagonal_partition_counts(300);
        assert_eq!(dp.counts(), &pent[..]);
    }

    #[test]
    fn monotone_when_one_is_a_part() {
        let t = partition_counts(500, &set_s(500)).unwrap();
        for n in 0..500usize {
            assert!(t.counts()[n + 1] >= t.counts()[n], "counts dropped at {n}");
            assert!(!t.counts()[n + 1].is_zero());
        }
    }

    #[test]
    fn rejects_zero_part_and_bad_lists() {
        assert!(PartSet::explicit(vec![0, 1, 2]).is_err());
        assert!(PartSet::explicit(vec![1, 1, 2]).is_err());
        assert!(PartSet::explicit(vec![2, 1]).is_err());
        assert!(matches!(
            partition_counts_capped(100, &PartSet::all(), 50),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn list_reader_round_trip() {
        let text = "1\n2\n4\n\n5\n";
        let set = PartSet::from_list_reader(text.as_bytes(), "file:test").unwrap();
        assert_eq!(set.parts_up_to(10).unwrap(), vec![1, 2, 4, 5]);
        assert!(PartSet::from_list_reader("3\n2\n".as_bytes(), "x").is_err());
        assert!(PartSet::from_list_reader("abc\n".as_bytes(), "x").is_err());
    }

    #[test]
    fn binary_round_trip() {
        let t = partition_counts(200, &set_s(200)).unwrap();
        let mut buf = Vec::new();
        t.write_binary(&mut buf).unwrap();
        let back = PartitionTable::read_binary(&mut buf.as_slice()).unwrap();
        assert_eq!(t, back);
        assert!(PartitionTable::read_binary(&mut &b"NOTMAGIC"[..]).is_err());
    }

    #[test]
    fn csv_export_shape() {
        let t = partition_counts(4, &set_s(4)).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,count\n0,1\n1,1\n2,2\n3,2\n4,4\n"
        );
    }

    #[test]
    fn log_biguint_accuracy() {
        assert_eq!(log_biguint(&BigUint::zero()), f64::NEG_INFINITY);
        assert!((log_biguint(&BigUint::one()) - 0.0).abs() < 1e-15);
        let v = BigUint::from(190_569_292u64);
        assert!((log_biguint(&v) - (190_569_292f64).ln()).abs() < 1e-12);
        // 2^300: log = 300 ln 2 exactly.
        let big = BigUint::one() << 300;
        assert!((log_biguint(&big) - 300.0 * std::f64::consts::LN_2).abs() < 1e-10);
    }
}
