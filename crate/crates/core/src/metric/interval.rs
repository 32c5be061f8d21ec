use core::fmt;

/// How a bound was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    ExactChart,
    ProductMax,
    AffineInvariance,
    ProjectionLower,
    InclusionUpper,
    SliceUpper,
    DeltaBound,
    PathOptimizer,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::ExactChart,
        Method::ProductMax,
        Method::AffineInvariance,
        Method::ProjectionLower,
        Method::InclusionUpper,
        Method::SliceUpper,
        Method::DeltaBound,
        Method::PathOptimizer,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::ExactChart => "exact-chart",
            Method::ProductMax => "product-max",
            Method::AffineInvariance => "affine-invariance",
            Method::ProjectionLower => "projection-lower",
            Method::InclusionUpper => "inclusion-upper",
            Method::SliceUpper => "slice-upper",
            Method::DeltaBound => "delta-bound",
            Method::PathOptimizer => "path-optimizer",
        }
    }

    pub fn from_tag(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.tag() == s)
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Set of [`Method`] tags.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
pub struct Methods(u8);

impl Methods {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn single(m: Method) -> Self {
        Self(m.bit())
    }

    pub fn insert(&mut self, m: Method) {
        self.0 |= m.bit();
    }

    pub fn with(mut self, m: Method) -> Self {
        self.insert(m);
        self
    }

    pub fn union(self, other: Methods) -> Self {
        Self(self.0 | other.0)
    }

    pub fn contains(&self, m: Method) -> bool {
        self.0 & m.bit() != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Method> + '_ {
        Method::ALL.into_iter().filter(|m| self.contains(*m))
    }
}

impl fmt::Debug for Methods {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(Method::tag)).finish()
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Methods {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(Method::tag))
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Methods {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let tags: alloc::vec::Vec<alloc::string::String> = serde::Deserialize::deserialize(d)?;
        let mut m = Methods::empty();
        for t in tags {
            m.insert(
                Method::from_tag(&t)
                    .ok_or_else(|| serde::de::Error::custom(alloc::format!("unknown method tag {t}")))?,
            );
        }
        Ok(m)
    }
}

/// Certified bounds `lo <= K <= hi` on a Kobayashi distance or metric value.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistanceInterval {
    pub lo: f64,
    pub hi: f64,
    pub methods: Methods,
}

impl DistanceInterval {
    pub fn exact(value: f64, methods: Methods) -> Self {
        Self { lo: value, hi: value, methods }
    }

    /// Interval from bounds; a crossing caused by rounding collapses onto `hi`.
    pub fn new(lo: f64, hi: f64, methods: Methods) -> Self {
        Self { lo: lo.min(hi), hi, methods }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `hi / lo`, infinite when `lo = 0 < hi`.
    pub fn ratio(&self) -> f64 {
        if self.hi == 0.0 {
            1.0
        } else {
            self.hi / self.lo
        }
    }

    pub fn with(mut self, m: Method) -> Self {
        self.methods.insert(m);
        self
    }

    /// Interval of `max(a, b)`.
    pub fn max(&self, other: &Self) -> Self {
        Self { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi), methods: self.methods.union(other.methods) }
    }
}
