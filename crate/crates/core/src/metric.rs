//! Point clouds approximating `U_q` and `V_q`, Hausdorff distances on the real
//! line, and one-sided continuity probes.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::enumerate::{bracket_distance, Language, SetKind};
use crate::error::{Error, Result};
use crate::numerics::{eval_value, tail_bound, BaseValue, XReal};
use crate::words::Dyadic;

/// Bits used when exact values are reported as rational enclosures.
pub const REPORT_BITS: u32 = 64;

/// Finite approximation of a value set.
///
/// Every member of the target set lies within `per_point_error` of a point and,
/// when `certified`, every point is itself a member.
#[derive(Debug, Clone)]
pub struct PointCloud {
    pub points: Vec<XReal>,
    pub per_point_error: XReal,
    pub base: BaseValue,
    pub kind: SetKind,
    pub depth: usize,
    pub certified: bool,
}

/// Default `α` depth for a prefix depth `n`.
pub fn alpha_depth_for(n: usize) -> usize {
    (2 * n).max(64)
}

/// Values of one member per word of `B_n`. The error radius is `tail_bound(q, n)`,
/// or `0` when every listed cylinder holds a single member.
pub fn approx_set_points(q: &BaseValue, kind: SetKind, n: usize) -> Result<PointCloud> {
    approx_set_points_with(q, kind, n, alpha_depth_for(n))
}

pub fn approx_set_points_with(
    q: &BaseValue,
    kind: SetKind,
    n: usize,
    alpha_depth: usize,
) -> Result<PointCloud> {
    q.check_in_range()?;
    let lang = Language::new(q, kind, alpha_depth)?;
    let result = lang.prefixes(n);
    let mut certified = result.certified;
    let mut all_unique = lang.is_exact();
    let mut points = Vec::with_capacity(result.upper.len());
    for w in result.upper.words() {
        let seq = match lang.completion(w.digits()) {
            Some(c) => c,
            None => {
                certified = false;
                w.zero_padded()
            }
        };
        all_unique &= lang.unique_continuation(w.digits());
        points.push(eval_value(&seq, q)?);
    }
    let points = sort_dedup(points)?;
    let per_point_error = if all_unique {
        XReal::zero(q)
    } else {
        tail_bound(q, n)?
    };
    Ok(PointCloud {
        points,
        per_point_error,
        base: q.clone(),
        kind,
        depth: n,
        certified,
    })
}

fn sort_dedup(mut points: Vec<XReal>) -> Result<Vec<XReal>> {
    let mut failure = None;
    points.sort_by(|a, b| {
        a.compare(b).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut out: Vec<XReal> = Vec::with_capacity(points.len());
    for p in points {
        match out.last() {
            Some(last) if last.compare(&p)? == Ordering::Equal => {}
            _ => out.push(p),
        }
    }
    Ok(out)
}

impl PointCloud {
    /// Same point set (exact comparison).
    pub fn same_points(&self, other: &PointCloud) -> Result<bool> {
        if self.points.len() != other.points.len() {
            return Ok(false);
        }
        for (a, b) in self.points.iter().zip(&other.points) {
            if a.compare(b)? != Ordering::Equal {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Inserts a point, keeping the cloud sorted and deduplicated.
    pub fn insert(&mut self, x: XReal) -> Result<()> {
        let mut lo = 0;
        let mut hi = self.points.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.points[mid].compare(&x)? {
                Ordering::Less => lo = mid + 1,
                Ordering::Equal => return Ok(()),
                Ordering::Greater => hi = mid,
            }
        }
        self.points.insert(lo, x);
        Ok(())
    }
}

/// Exact Hausdorff distance of two clouds over one base, widened by their errors.
#[derive(Debug, Clone)]
pub struct HausdorffBracket {
    pub distance: XReal,
    pub low: XReal,
    pub high: XReal,
}

impl HausdorffBracket {
    /// Outward-rounded rational bounds.
    pub fn rational_bounds(&self, bits: u32) -> (BigRational, BigRational) {
        let (lo, _) = self.low.enclosure_bits(bits);
        let (_, hi) = self.high.enclosure_bits(bits);
        (
            round_dyadic(&lo, bits, false).max(BigRational::zero()),
            round_dyadic(&hi, bits, true),
        )
    }
}

/// `max_{a in from} min_{b in to} |a - b|` for sorted point lists.
fn directed(from: &[XReal], to: &[XReal]) -> Result<XReal> {
    let mut best = XReal::zero(from[0].base());
    let mut j = 0;
    for a in from {
        while j + 1 < to.len() && to[j + 1].compare(a)? != Ordering::Greater {
            j += 1;
        }
        let mut nearest = a.sub(&to[j])?.abs()?;
        if j + 1 < to.len() {
            let d = to[j + 1].sub(a)?.abs()?;
            if d.compare(&nearest)? == Ordering::Less {
                nearest = d;
            }
        }
        if nearest.compare(&best)? == Ordering::Greater {
            best = nearest;
        }
    }
    Ok(best)
}

/// Hausdorff distance of the finite sets by a sorted nearest-neighbour sweep,
/// bracketed by `± (err_A + err_B)`.
pub fn hausdorff_real(a: &PointCloud, b: &PointCloud) -> Result<HausdorffBracket> {
    if a.points.is_empty() || b.points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let ab = directed(&a.points, &b.points)?;
    let ba = directed(&b.points, &a.points)?;
    let distance = if ab.compare(&ba)? == Ordering::Less {
        ba
    } else {
        ab
    };
    let err = a.per_point_error.add(&b.per_point_error)?;
    let mut low = distance.sub(&err)?;
    if low.signum()? == Ordering::Less {
        low = XReal::zero(a.points[0].base());
    }
    let high = distance.add(&err)?;
    Ok(HausdorffBracket {
        distance,
        low,
        high,
    })
}

/// Rational enclosure of the Hausdorff distance between clouds over different
/// bases, from `2^{-bits}` enclosures of every point.
/// Rounds to a multiple of `2^-bits`, downward or upward.
fn round_dyadic(x: &BigRational, bits: u32, up: bool) -> BigRational {
    let scale = BigRational::from_integer(BigInt::one() << bits);
    let y = x * &scale;
    let r = if up { y.ceil() } else { y.floor() };
    r / scale
}

/// Rational bounds on the Hausdorff distance of clouds over possibly different
/// bases, as multiples of `2^-bits`.
pub fn hausdorff_enclosure(
    a: &PointCloud,
    b: &PointCloud,
    bits: u32,
) -> Result<(BigRational, BigRational)> {
    if a.points.is_empty() || b.points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let ia: Vec<_> = a.points.iter().map(|p| p.enclosure_bits(bits)).collect();
    let ib: Vec<_> = b.points.iter().map(|p| p.enclosure_bits(bits)).collect();
    let slack = BigRational::new(BigInt::one(), BigInt::one() << bits.saturating_sub(1));
    let (l1, h1) = directed_intervals(&ia, &ib, &slack);
    let (l2, h2) = directed_intervals(&ib, &ia, &slack);
    let ea = a.per_point_error.enclosure_bits(bits).1;
    let eb = b.per_point_error.enclosure_bits(bits).1;
    let err = ea + eb;
    let low = (l1.max(l2) - &err).max(BigRational::zero());
    let high = h1.max(h2) + err;
    Ok((
        round_dyadic(&low, bits, false),
        round_dyadic(&high, bits, true),
    ))
}

type Interval = (BigRational, BigRational);

/// Bounds on `max_a min_b |a - b|` for points known up to sorted intervals of
/// width below `slack`.
fn directed_intervals(
    from: &[Interval],
    to: &[Interval],
    slack: &BigRational,
) -> (BigRational, BigRational) {
    let mut low = BigRational::zero();
    let mut high = BigRational::zero();
    for (alo, ahi) in from {
        let mut best_low: Option<BigRational> = None;
        let mut best_high: Option<BigRational> = None;
        // to is sorted by lower end; scan outward from the insertion point
        let pos = to.partition_point(|(blo, _)| blo < alo);
        let mut visit = |(blo, bhi): &Interval| -> bool {
            let dlow = if bhi < alo {
                alo - bhi
            } else if blo > ahi {
                blo - ahi
            } else {
                BigRational::zero()
            };
            let dhigh = (ahi - blo).max(bhi - alo);
            let stop = best_high.as_ref().is_some_and(|h| dlow > h + slack);
            if best_low.as_ref().is_none_or(|l| &dlow < l) {
                best_low = Some(dlow);
            }
            if best_high.as_ref().is_none_or(|h| &dhigh < h) {
                best_high = Some(dhigh);
            }
            stop
        };
        for b in &to[pos..] {
            if visit(b) {
                break;
            }
        }
        for b in to[..pos].iter().rev() {
            if visit(b) {
                break;
            }
        }
        low = low.max(best_low.unwrap_or_default());
        high = high.max(best_high.unwrap_or_default());
    }
    (low, high)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "Left",
            Side::Right => "Right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbeVerdict {
    ConvergesWithinDepth,
    GapDetected(Dyadic),
    Inconclusive,
}

impl std::fmt::Display for ProbeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProbeVerdict::ConvergesWithinDepth => f.write_str("ConvergesWithinDepth"),
            ProbeVerdict::GapDetected(g) => write!(f, "GapDetected({g})"),
            ProbeVerdict::Inconclusive => f.write_str("Inconclusive"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub k: u32,
    /// Base spec string of `q_k`.
    pub q_k: String,
    /// `None` when the enumeration at `q_k` was too coarse to decide.
    pub d_sym_to_u: Option<Dyadic>,
    pub d_sym_to_v: Option<Dyadic>,
    pub d_real_low: String,
    pub d_real_high: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityReport {
    pub q: String,
    pub side: Side,
    pub kind: SetKind,
    pub depth: usize,
    pub rows: Vec<ProbeRow>,
    /// Behaviour of the distance to `U_q'`.
    pub to_u: ProbeVerdict,
    /// Behaviour of the distance to `V_q'`.
    pub to_v: ProbeVerdict,
    pub verdict: ProbeVerdict,
}

impl ContinuityReport {
    /// One row per step; fields containing commas (polynomial base specs) are quoted.
    pub fn to_csv(&self) -> String {
        let show = |d: &Option<Dyadic>| d.map_or("Unknown".to_string(), |d| d.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = [
            "k",
            "q_k",
            "d_sym_to_U",
            "d_sym_to_V",
            "d_real_low",
            "d_real_high",
        ];
        let mut write = |rec: &[String]| w.write_record(rec).expect("in-memory csv");
        write(&header.map(String::from));
        for r in &self.rows {
            write(&[
                r.k.to_string(),
                r.q_k.clone(),
                show(&r.d_sym_to_u),
                show(&r.d_sym_to_v),
                r.d_real_low.clone(),
                r.d_real_high.clone(),
            ]);
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }
}

/// Verdict for one target: zero distance at the last step means convergence
/// within the depth, an identical nonzero distance over the last three steps a gap.
fn series_verdict(series: &[Option<Dyadic>]) -> ProbeVerdict {
    match series.last() {
        Some(Some(d)) if d.is_zero() => return ProbeVerdict::ConvergesWithinDepth,
        None | Some(None) => return ProbeVerdict::Inconclusive,
        _ => {}
    }
    if series.len() >= 3 {
        let tail = &series[series.len() - 3..];
        if let Some(g) = tail[0] {
            if tail.iter().all(|d| *d == Some(g)) {
                return ProbeVerdict::GapDetected(g);
            }
        }
    }
    ProbeVerdict::Inconclusive
}

/// Probe parameters; `delta` scales the schedule `q_k = q ∓ 2^{-k} delta`.
#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub side: Side,
    pub kind: SetKind,
    pub steps: u32,
    pub depth: usize,
    pub delta: BigRational,
    pub alpha_depth: usize,
    /// Worker threads; `0` picks the available parallelism.
    pub threads: usize,
}

impl ProbeConfig {
    pub fn new(side: Side, kind: SetKind, steps: u32, depth: usize) -> Self {
        ProbeConfig {
            side,
            kind,
            steps,
            depth,
            delta: BigRational::new(BigInt::one(), BigInt::from(4)),
            alpha_depth: alpha_depth_for(depth),
            threads: 1,
        }
    }
}

/// Follows `q_k = q ∓ 2^{-k} Δ` and records symbolic distances of the family at
/// `q_k` to both `U_q'` and `V_q'`, plus real distances to the one-sided limit
/// (`U_q` from the left, `V_q` from the right).
pub fn continuity_probe(q: &BaseValue, cfg: &ProbeConfig) -> Result<ContinuityReport> {
    let n = cfg.depth;
    let target_u = Language::new(q, SetKind::U, cfg.alpha_depth)?.prefixes(n);
    let target_v = Language::new(q, SetKind::V, cfg.alpha_depth)?.prefixes(n);
    let limit_kind = match cfg.side {
        Side::Left => SetKind::U,
        Side::Right => SetKind::V,
    };
    let limit_cloud = approx_set_points_with(q, limit_kind, n, cfg.alpha_depth)?;
    let exact_target = |r: &crate::enumerate::EnumResult| r.exact_set().cloned();
    let (tu, tv) = match (exact_target(&target_u), exact_target(&target_v)) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(Error::PrecisionExhausted(cfg.alpha_depth as u32)),
    };

    let mut bases = Vec::new();
    for k in 1..=cfg.steps {
        let offset = &cfg.delta / BigRational::from_integer(BigInt::one() << k);
        let offset = match cfg.side {
            Side::Left => -offset,
            Side::Right => offset,
        };
        let qk = q.offset(&offset)?;
        if qk.cmp_rational(&BigRational::one())? != Ordering::Greater {
            return Err(Error::BaseOutOfRange);
        }
        bases.push((k, qk));
    }

    let row = |(k, qk): &(u32, BaseValue)| -> Result<ProbeRow> {
        let family = Language::new(qk, cfg.kind, cfg.alpha_depth)?.prefixes(n);
        let d_u = bracket_distance(&family, &tu)?;
        let d_v = bracket_distance(&family, &tv)?;
        let cloud = approx_set_points_with(qk, cfg.kind, n, cfg.alpha_depth)?;
        let (lo, hi) = hausdorff_enclosure(&cloud, &limit_cloud, REPORT_BITS)?;
        Ok(ProbeRow {
            k: *k,
            q_k: qk.spec_string(),
            d_sym_to_u: d_u,
            d_sym_to_v: d_v,
            d_real_low: lo.to_string(),
            d_real_high: hi.to_string(),
        })
    };
    let rows = run_ordered(&bases, cfg.threads, row)?;

    let to_u = series_verdict(&rows.iter().map(|r| r.d_sym_to_u).collect::<Vec<_>>());
    let to_v = series_verdict(&rows.iter().map(|r| r.d_sym_to_v).collect::<Vec<_>>());
    let (limit, other) = match cfg.side {
        Side::Left => (to_u, to_v),
        Side::Right => (to_v, to_u),
    };
    let verdict = match (limit, other) {
        (ProbeVerdict::ConvergesWithinDepth, ProbeVerdict::GapDetected(g)) => {
            ProbeVerdict::GapDetected(g)
        }
        (ProbeVerdict::ConvergesWithinDepth, ProbeVerdict::ConvergesWithinDepth) => {
            ProbeVerdict::ConvergesWithinDepth
        }
        _ => ProbeVerdict::Inconclusive,
    };
    Ok(ContinuityReport {
        q: q.spec_string(),
        side: cfg.side,
        kind: cfg.kind,
        depth: n,
        rows,
        to_u,
        to_v,
        verdict,
    })
}

/// Maps `f` over `items` on up to `threads` workers, keeping the input order.
fn run_ordered<T: Sync, R: Send>(
    items: &[T],
    threads: usize,
    f: impl Fn(&T) -> Result<R> + Sync,
) -> Result<Vec<R>> {
    let threads = match threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        t => t,
    }
    .min(items.len().max(1));
    if threads <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Result<Vec<R>>>()))
            .collect();
        let mut out = Vec::with_capacity(items.len());
        for h in handles {
            out.extend(h.join().expect("probe worker panicked")?);
        }
        Ok(out)
    })
}

/// Symbolic distance between `U_q'` and `V_q'` at depth `n`; `None` when the
/// enumeration is not certified.
pub fn discontinuity_gap(q: &BaseValue, n: usize) -> Result<Option<Dyadic>> {
    let depth = alpha_depth_for(n);
    let u = Language::new(q, SetKind::U, depth)?.prefixes(n);
    let v = Language::new(q, SetKind::V, depth)?.prefixes(n);
    match (u.exact_set(), v.exact_set()) {
        (Some(a), Some(b)) => crate::enumerate::symbolic_hausdorff(a, b).map(Some),
        (_, Some(b)) => bracket_distance(&u, b),
        (Some(a), _) => bracket_distance(&v, a),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::words::{Alphabet, PeriodicSeq};

    fn golden() -> BaseValue {
        BaseValue::parse("poly:-1,-1,1@3/2,2", Alphabet::BINARY).unwrap()
    }

    fn value(s: &str, q: &BaseValue) -> XReal {
        eval_value(&PeriodicSeq::parse(s, Alphabet::BINARY).unwrap(), q).unwrap()
    }

    #[test]
    fn golden_clouds() {
        let g = golden();
        let u = approx_set_points(&g, SetKind::U, 6).unwrap();
        assert_eq!(u.points.len(), 2);
        assert!(u.points[0].is_zero().unwrap());
        assert_eq!(u.points[1].compare(&g.q()).unwrap(), Ordering::Equal);
        assert!(u.per_point_error.is_zero().unwrap());

        let v = approx_set_points(&g, SetKind::V, 12).unwrap();
        let mut probe = v.clone();
        for s in ["(10)", "0(10)"] {
            probe.insert(value(s, &g)).unwrap();
        }
        assert!(probe.same_points(&v).unwrap());
    }

    #[test]
    fn clouds_agree_off_v() {
        let q = BaseValue::rational(rat(13, 10), Alphabet::BINARY).unwrap();
        let u = approx_set_points(&q, SetKind::U, 8).unwrap();
        let v = approx_set_points(&q, SetKind::V, 8).unwrap();
        assert!(u.same_points(&v).unwrap());
    }

    #[test]
    fn singletons() {
        let q = BaseValue::integer(2, Alphabet::BINARY).unwrap();
        let cloud = |x: i64| PointCloud {
            points: vec![XReal::from_rational(&q, rat(x, 1))],
            per_point_error: XReal::zero(&q),
            base: q.clone(),
            kind: SetKind::U,
            depth: 0,
            certified: true,
        };
        let h = hausdorff_real(&cloud(0), &cloud(1)).unwrap();
        assert_eq!(h.distance.as_rational(), Some(rat(1, 1)));
        let h = hausdorff_real(&cloud(1), &cloud(1)).unwrap();
        assert!(h.distance.is_zero().unwrap());
        let (lo, hi) = hausdorff_enclosure(&cloud(0), &cloud(1), 32).unwrap();
        assert!(lo <= rat(1, 1) && rat(1, 1) <= hi);
    }

    #[test]
    fn gaps() {
        let g = golden();
        assert_eq!(
            discontinuity_gap(&g, 10).unwrap(),
            Some(Dyadic::pow2_neg(2))
        );
        let q = BaseValue::rational(rat(13, 10), Alphabet::BINARY).unwrap();
        assert_eq!(discontinuity_gap(&q, 10).unwrap(), Some(Dyadic::ZERO));
    }

    #[test]
    fn verdict_rules() {
        let g = Some(Dyadic::pow2_neg(2));
        let z = Some(Dyadic::ZERO);
        assert_eq!(
            series_verdict(&[g, g, z]),
            ProbeVerdict::ConvergesWithinDepth
        );
        assert_eq!(
            series_verdict(&[z, g, g, g]),
            ProbeVerdict::GapDetected(Dyadic::pow2_neg(2))
        );
        assert_eq!(series_verdict(&[g, None, g]), ProbeVerdict::Inconclusive);
    }
}
