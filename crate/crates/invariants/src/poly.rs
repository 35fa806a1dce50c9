use polyser::{Coeff, TruncSeries};

/// A complex-valued polynomial `re + i·im` with real series parts.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly<C: Coeff> {
    pub re: TruncSeries<C>,
    pub im: TruncSeries<C>,
}

impl<C: Coeff> CPoly<C> {
    pub fn new(re: TruncSeries<C>, im: TruncSeries<C>) -> Self {
        Self { re, im }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        Self { re: self.re.scale(k), im: self.im.scale(k) }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> TruncSeries<C> {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
}

/// `z = s + ip` and `w = d + ic` over the variables `(s, p, d, c)`.
pub fn zw<C: Coeff>(cap: u32) -> (CPoly<C>, CPoly<C>) {
    let v = |i| TruncSeries::<C>::var(4, cap, i);
    (CPoly::new(v(0), v(1)), CPoly::new(v(2), v(3)))
}

/// The Hilbert basis `[f₂, f₃, f₄, f₅, f₆]` as polynomials in `(s, p, d, c)`.
pub fn basis_polys<C: Coeff>(cap: u32) -> [TruncSeries<C>; 5] {
    let (z, w) = zw::<C>(cap);
    let three = C::from_i64(3);
    let f2 = &z.norm_sqr() + &w.norm_sqr();
    let f3 = z.mul(&z).mul(&z).sub(&z.mul(&w).mul(&w).scale(&three)).re;
    let k = z.mul(&w.conj()).sub(&z.conj().mul(&w));
    let h = w.mul(&w).mul(&w).sub(&w.mul(&z).mul(&z).scale(&three));
    let f4 = k.mul(&k).re;
    let f5 = &k.im * &h.im;
    let f6 = &h.im * &h.im;
    [f2, f3, f4, f5, f6]
}

/// `ĥ₆ = Re((z² + w²)³)`.
pub fn hatf6_poly<C: Coeff>(cap: u32) -> TruncSeries<C> {
    let (z, w) = zw::<C>(cap);
    let q = z.mul(&z).add(&w.mul(&w));
    q.mul(&q).mul(&q).re
}
