//! Daubechies scaling filters and exact dyadic values of `φ` and `ψ`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};

pub const MIN_ORDER: u8 = 2;
pub const MAX_ORDER: u8 = 8;

const DB3: [f64; 6] = [
    0.332670552950082616,
    0.80689150931109257649,
    0.4598775021184915701,
    -0.1350110200102545887,
    -0.085441273882026661693,
    0.035226291885709536603,
];

const DB4: [f64; 8] = [
    0.23037781330889650086,
    0.71484657055291564709,
    0.63088076792985890788,
    -0.027983769416859854211,
    -0.18703481171909308408,
    0.030841381835560763627,
    0.032883011666885199735,
    -0.010597401785069032105,
];

const DB5: [f64; 10] = [
    0.16010239797419291448,
    0.60382926979718967054,
    0.72430852843777292773,
    0.13842814590132073151,
    -0.24229488706638203186,
    -0.032244869584638374648,
    0.077571493840045713523,
    -0.0062414902127982742742,
    -0.012580751999081999469,
    0.003335725285473771278,
];

const DB6: [f64; 12] = [
    0.11154074335010946362,
    0.49462389039845308568,
    0.75113390802109535068,
    0.31525035170919762909,
    -0.22626469396543982008,
    -0.12976686756726193556,
    0.097501605587323049102,
    0.027522865530305728626,
    -0.031582039317486029565,
    0.00055384220116149613925,
    0.0047772575109455106396,
    -0.0010773010853084795649,
];

const DB7: [f64; 14] = [
    0.07785205408500917902,
    0.39653931948191730654,
    0.72913209084623511992,
    0.46978228740519312247,
    -0.14390600392856497541,
    -0.22403618499387498264,
    0.071309219266830264751,
    0.080612609151083071913,
    -0.03802993693501441358,
    -0.016574541630666880654,
    0.012550998556099840613,
    0.00042957797292136652113,
    -0.0018016407040474909153,
    0.00035371379997452024845,
];

const DB8: [f64; 16] = [
    0.054415842243104009955,
    0.31287159091429997066,
    0.67563073629728980681,
    0.58535468365420671277,
    -0.015829105256349305667,
    -0.28401554296154692652,
    0.00047248457391328277036,
    0.12874742662047845886,
    -0.01736930100180754617,
    -0.044088253930794751507,
    0.013981027917398281649,
    0.0087460940474057767164,
    -0.0048703529934515743104,
    -0.0003917403733769470463,
    0.00067544940645056936637,
    -0.00011747678412476953373,
];

/// Low-pass filter with `2·order` taps, normalized to `Σ h = √2`.
pub fn filter(order: u8) -> Result<Vec<f64>> {
    Ok(match order {
        2 => {
            let s3 = libm::sqrt(3.0);
            let d = 4.0 * core::f64::consts::SQRT_2;
            vec![(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d]
        }
        3 => DB3.to_vec(),
        4 => DB4.to_vec(),
        5 => DB5.to_vec(),
        6 => DB6.to_vec(),
        7 => DB7.to_vec(),
        8 => DB8.to_vec(),
        _ => return Err(domain!("Daubechies order {order} not in {MIN_ORDER}..={MAX_ORDER}")),
    })
}

/// `φ(k/2^level)` for `k = 0..=(taps-1)·2^level`, from the integer values
/// (eigenvector of the refinement matrix) and repeated use of
/// `φ(x) = √2 Σ h_m φ(2x − m)`.
pub fn scaling_values(h: &[f64], level: u32) -> Vec<f64> {
    let support = h.len() - 1;
    let mut values = integer_values(h);
    for n in 1..=level {
        let len = support * (1usize << n) + 1;
        let mut next = vec![0.0; len];
        for (k, slot) in next.iter_mut().enumerate() {
            if k % 2 == 0 {
                *slot = values[k / 2];
                continue;
            }
            // 2x − m = (k − m·2^{n−1})/2^{n−1}, indexed on the previous level
            let mut acc = 0.0;
            for (m, hm) in h.iter().enumerate() {
                let idx = k as i64 - ((m as i64) << (n - 1));
                if idx >= 0 && (idx as usize) < values.len() {
                    acc += hm * values[idx as usize];
                }
            }
            *slot = core::f64::consts::SQRT_2 * acc;
        }
        values = next;
    }
    values
}

/// `ψ(k/2^level)` on the same lattice, `ψ(x) = √2 Σ g_m φ(2x − m)` with
/// `g_m = (−1)^m h_{L−1−m}`; needs `φ` one level coarser.
pub fn wavelet_values(h: &[f64], phi_coarse: &[f64], level: u32) -> Vec<f64> {
    let taps = h.len();
    let support = taps - 1;
    let len = support * (1usize << level) + 1;
    let step = 1i64 << (level - 1);
    (0..len)
        .map(|k| {
            let mut acc = 0.0;
            for m in 0..taps {
                let g = if m % 2 == 0 { h[taps - 1 - m] } else { -h[taps - 1 - m] };
                let idx = k as i64 - m as i64 * step;
                if idx >= 0 && (idx as usize) < phi_coarse.len() {
                    acc += g * phi_coarse[idx as usize];
                }
            }
            core::f64::consts::SQRT_2 * acc
        })
        .collect()
}

/// Discrete cascade vectors `ψ^{(n)}`, `n = 1..=levels`, starting from
/// `φ^{(0)} = δ_0`. Each `ψ^{(n)}[k]` approximates `ψ(k/2^n)`, and the
/// integer shifts of `2^{-n/2} ψ^{(n)}` (by multiples of `2^n`) across all
/// `n` are exactly orthonormal: they are the synthesis vectors of the
/// discrete wavelet transform.
pub fn cascade_wavelets(h: &[f64], levels: u32) -> Vec<Vec<f64>> {
    let taps = h.len();
    let mut phi = vec![1.0];
    let mut out = Vec::with_capacity(levels as usize);
    for n in 1..=levels {
        let stride = 1usize << (n - 1);
        let len = (taps - 1) * ((1usize << n) - 1) + 1;
        let mut next_phi = vec![0.0; len];
        let mut psi = vec![0.0; len];
        for m in 0..taps {
            let hm = core::f64::consts::SQRT_2 * h[m];
            let gm = core::f64::consts::SQRT_2 * if m % 2 == 0 { h[taps - 1 - m] } else { -h[taps - 1 - m] };
            let off = m * stride;
            for (i, v) in phi.iter().enumerate() {
                next_phi[off + i] += hm * v;
                psi[off + i] += gm * v;
            }
        }
        out.push(psi);
        phi = next_phi;
    }
    out
}

/// Solves `φ(k) = √2 Σ_m h_m φ(2k − m)` with `Σ φ(k) = 1`.
fn integer_values(h: &[f64]) -> Vec<f64> {
    let n = h.len();
    let mut a = vec![vec![0.0; n + 1]; n];
    for (k, row) in a.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().take(n).enumerate() {
            let m = 2 * k as i64 - j as i64;
            if (0..n as i64).contains(&m) {
                *slot = core::f64::consts::SQRT_2 * h[m as usize];
            }
        }
        row[k] -= 1.0;
    }
    // the system is singular by construction; trade one equation for the normalization
    for slot in a[n - 1].iter_mut().take(n) {
        *slot = 1.0;
    }
    a[n - 1][n] = 1.0;
    gauss_solve(a)
}

fn gauss_solve(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for c in col..=n {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (a[row][n] - s) / a[row][row];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters_are_orthonormal() {
        for order in MIN_ORDER..=MAX_ORDER {
            let h = filter(order).unwrap();
            let s: f64 = h.iter().sum();
            assert!((s - core::f64::consts::SQRT_2).abs() < 1e-14, "order {order}");
            for shift in 0..h.len() / 2 {
                let dot: f64 = (0..h.len() - 2 * shift).map(|k| h[k] * h[k + 2 * shift]).sum();
                let want = if shift == 0 { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-14, "order {order} shift {shift}: {dot}");
            }
        }
        assert!(filter(9).is_err());
    }

    #[test]
    fn db2_integer_values_closed_form() {
        // φ(1) = (1+√3)/2, φ(2) = (1−√3)/2
        let v = integer_values(&filter(2).unwrap());
        let s3 = libm::sqrt(3.0);
        assert!(v[0].abs() < 1e-14 && v[3].abs() < 1e-14);
        assert!((v[1] - (1.0 + s3) / 2.0).abs() < 1e-14);
        assert!((v[2] - (1.0 - s3) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn cascade_vectors_are_orthonormal() {
        let h = filter(3).unwrap();
        let c = cascade_wavelets(&h, 5);
        // ⟨2^{-n/2}ψ^{(n)}(· − a2^n), 2^{-n'/2}ψ^{(n')}(· − b2^{n'})⟩ on ℤ
        let shifted = |n: usize, a: i64| -> alloc::collections::BTreeMap<i64, f64> {
            let scale = libm::ldexp(1.0, -(n as i32 + 1) / 2) * if (n + 1) % 2 == 1 { core::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
            c[n].iter().enumerate().map(|(k, v)| (k as i64 + (a << (n + 1)), v * scale)).collect()
        };
        let mut worst: f64 = 0.0;
        for (n1, a1) in [(0usize, 0i64), (0, 1), (1, 0), (2, -1), (4, 0), (4, 1)] {
            for (n2, a2) in [(0usize, 0i64), (0, 3), (1, 1), (2, 0), (4, 0)] {
                let u = shifted(n1, a1);
                let v = shifted(n2, a2);
                let dot: f64 = u.iter().filter_map(|(k, x)| v.get(k).map(|y| x * y)).sum();
                let want = if (n1, a1) == (n2, a2) { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        assert!(worst < 1e-13, "{worst}");
    }

    #[test]
    fn partition_of_unity_at_every_level() {
        let h = filter(4).unwrap();
        let level = 6;
        let phi = scaling_values(&h, level);
        let per = 1usize << level;
        for offset in 0..per {
            let s: f64 = phi.iter().skip(offset).step_by(per).sum();
            assert!((s - 1.0).abs() < 1e-12, "offset {offset}: {s}");
        }
    }
}
