use super::{CdfTable, OtError};

/// One piece of the composite `c(y) = D⁻¹(S(y) + shift)` on which both the
/// source density and the destination density at `c(y)` are constant, so `c`
/// is affine.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    pub y0: f64,
    pub y1: f64,
    /// Extended source cell.
    pub src_cell: usize,
    pub src_slope: f64,
    pub dst_slope: f64,
    pub c0: f64,
    pub c1: f64,
}

/// Sweeps `y` over one period `[0, 1)` of the source table, merging the source
/// breakpoints with the preimages of the destination breakpoints under
/// `y ↦ S(y) + shift`, and hands each affine piece to `visit`.
///
/// Events are compared in mass space. On ties the source event is taken first
/// and the destination event then yields a zero-length segment. At most
/// `2N + 2` segments are produced.
pub(crate) fn sweep(
    src: &CdfTable,
    dst: &CdfTable,
    shift: f64,
    mut visit: impl FnMut(&Segment),
) -> Result<(), OtError> {
    if !(shift > -1.0 && shift < 1.0) {
        return Err(OtError::AlphaOutOfRange(shift));
    }
    let n = src.len();
    let mut ks = n; // cell straddling y = 0
    let mut kd = dst.cell_of_mass(shift);
    let mut y0 = 0.0;
    let mut s0 = 0.0;
    let composite = |kd: usize, s: f64| {
        dst.breakpoint(kd) + (s + shift - dst.cum(kd)) / dst.slope(kd)
    };
    loop {
        let next_bp = src.breakpoint(ks + 1);
        let (src_y, src_s, last) = if next_bp >= 1.0 {
            (1.0, 1.0, true)
        } else {
            (next_bp, src.cum(ks + 1), false)
        };
        let dst_s = dst.cum(kd + 1) - shift;
        let src_first = src_s <= dst_s;
        let (y1, s1) = if src_first {
            (src_y, src_s)
        } else {
            let y = src.breakpoint(ks) + (dst_s - src.cum(ks)) / src.slope(ks);
            (y.clamp(y0, src_y), dst_s)
        };
        if y1 < y0 {
            return Err(OtError::DegenerateSegment { prev: y0, at: y1 });
        }
        visit(&Segment {
            y0,
            y1,
            src_cell: ks,
            src_slope: src.slope(ks),
            dst_slope: dst.slope(kd),
            c0: composite(kd, s0),
            c1: composite(kd, s1),
        });
        if src_first {
            if last {
                return Ok(());
            }
            ks += 1;
        } else {
            kd += 1;
            if kd > dst.last_cell() {
                return Err(OtError::DegenerateSegment { prev: y0, at: y1 });
            }
        }
        y0 = y1;
        s0 = s1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_ot::{build_cdf, PeriodicDensity};

    #[test]
    fn segments_tile_the_period_and_match_direct_evaluation() {
        let f = build_cdf(&PeriodicDensity::from_fn(32, |t| 1.0 + 0.5 * (2.0 * std::f64::consts::PI * t).sin()).unwrap());
        let g = build_cdf(&PeriodicDensity::from_fn(32, |t| 2.0 + (4.0 * std::f64::consts::PI * t).cos()).unwrap());
        for &alpha in &[-0.93, -0.2, 0.0, 0.37, 0.9] {
            let mut prev = 0.0;
            let mut count = 0;
            sweep(&g, &f, alpha, |seg| {
                assert_eq!(seg.y0, prev);
                prev = seg.y1;
                count += 1;
                let mid = 0.5 * (seg.y0 + seg.y1);
                let direct = f.inverse(g.eval(mid) + alpha);
                assert!((0.5 * (seg.c0 + seg.c1) - direct).abs() < 1e-12);
            })
            .unwrap();
            assert_eq!(prev, 1.0);
            assert!(count <= 2 * 32 + 2);
        }
    }

    #[test]
    fn ties_emit_zero_length_segments() {
        let u = build_cdf(&PeriodicDensity::uniform(4));
        let mut lengths = Vec::new();
        sweep(&u, &u, 0.0, |seg| lengths.push(seg.y1 - seg.y0)).unwrap();
        assert!(lengths.contains(&0.0));
        assert!((lengths.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shift_outside_range_is_rejected() {
        let u = build_cdf(&PeriodicDensity::uniform(4));
        assert!(matches!(
            sweep(&u, &u, 1.0, |_| {}),
            Err(OtError::AlphaOutOfRange(_))
        ));
    }
}
