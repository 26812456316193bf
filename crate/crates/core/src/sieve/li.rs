//! li(x) = ∫_2^x dt / ln t.

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Relative accuracy target of the quadrature.
const REL_TOL: f64 = 1e-12;

/// Logarithmic integral from 2, by adaptive Simpson quadrature of e^s/s
/// over s = ln t in [ln 2, ln x].
pub fn li(x: f64) -> Result<f64> {
    li_in::<f64>(x)
}

/// [`li`] evaluated in `T`.
pub fn li_in<T: Real>(x: f64) -> Result<T> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(Error::OutOfRange(format!("li needs finite x >= 2, got {x}")));
    }
    let (a, b) = (real::<T>(2.0f64.ln()), real::<T>(x.ln()));
    if b <= a {
        return Ok(T::zero());
    }
    let f = |s: T| s.exp() / s;
    // rough magnitude for the absolute tolerance
    let scale = real::<T>(x / x.ln());
    let tol = scale * real::<T>(REL_TOL).max(T::epsilon() * real(16.0));
    let (fa, fb) = (f(a), f(b));
    let m = (a + b) / real(2.0);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    Ok(adaptive(&f, a, b, fa, fm, fb, whole, tol, 40))
}

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / real(6.0) * (fa + real::<T>(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, fa: T, fm: T, fb: T, whole: T, tol: T, depth: u32) -> T {
    let two = real::<T>(2.0);
    let m = (a + b) / two;
    let (lm, rm) = ((a + m) / two, (m + b) / two);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let diff = left + right - whole;
    // stop once the refinement is below rounding of the local integral
    let floor = (left + right).abs() * T::epsilon() * real(64.0);
    if depth == 0 || diff.abs() <= real::<T>(15.0) * tol || diff.abs() <= floor {
        return left + right + diff / real(15.0);
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / two, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, tol / two, depth - 1)
}
