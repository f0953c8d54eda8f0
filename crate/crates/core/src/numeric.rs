//! Small numeric helpers shared across modules.

use num_complex::Complex64;

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, &mut self.re_c, z.re);
        neumaier(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        iter.into_iter().for_each(|z| s.add(z));
        s
    }
}

/// Plain complex dot product `sum_j x_j y_j` (no conjugation).
#[inline]
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (a, b) in x.iter().zip(y) {
        re += a.re * b.re - a.im * b.im;
        im += a.re * b.im + a.im * b.re;
    }
    Complex64::new(re, im)
}

/// Real cube root for real input, principal branch otherwise.
pub fn cbrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re.cbrt(), 0.0)
    } else {
        z.cbrt()
    }
}
