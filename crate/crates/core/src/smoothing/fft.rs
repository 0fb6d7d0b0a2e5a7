use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// In-place 2D transform of a `p x p` row-major buffer.
pub(crate) fn fft2(planner: &mut FftPlanner<f64>, data: &mut [Complex<f64>], p: usize, inverse: bool) {
    let fft = if inverse {
        planner.plan_fft_inverse(p)
    } else {
        planner.plan_fft_forward(p)
    };
    let mut scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    transpose(data, p);
    fft.process_with_scratch(data, &mut scratch);
    transpose(data, p);
}

fn transpose(data: &mut [Complex<f64>], p: usize) {
    for r in 0..p {
        for c in (r + 1)..p {
            data.swap(r * p + c, c * p + r);
        }
    }
}
