//! Serde adapters for big integers and rationals.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise. Rationals are always strings in the reduced
//! form `"p"` or `"p/q"` with `q > 0`. Both readers accept either form.

use std::fmt;

use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_rat, parse_rat, Int, Rat};

struct IntRef<'a>(&'a Int);

impl Serialize for IntRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct IntOwned(Int);

impl<'de> Deserialize<'de> for IntOwned {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = IntOwned;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<IntOwned, E> {
                Ok(IntOwned(Int::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<IntOwned, E> {
                Ok(IntOwned(Int::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<IntOwned, E> {
                v.trim().parse().map(IntOwned).map_err(|_| E::custom(format!("bad integer {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

struct RatRef<'a>(&'a Rat);

impl Serialize for RatRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(self.0))
    }
}

struct RatOwned(Rat);

impl<'de> Deserialize<'de> for RatOwned {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RatOwned;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational \"p/q\" string or an integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RatOwned, E> {
                Ok(RatOwned(Rat::from_integer(Int::from(v))))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RatOwned, E> {
                Ok(RatOwned(Rat::from_integer(Int::from(v))))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<RatOwned, E> {
                parse_rat(v).map(RatOwned).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

pub mod int {
    use super::*;
    pub fn serialize<S: Serializer>(v: &Int, s: S) -> Result<S::Ok, S::Error> {
        IntRef(v).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        IntOwned::deserialize(d).map(|x| x.0)
    }
}

pub mod int_vec {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(IntRef))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        Ok(Vec::<IntOwned>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}

pub mod int_mat {
    use super::*;
    struct Row<'a>(&'a [Int]);
    impl Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(self.0.iter().map(IntRef))
        }
    }
    pub fn serialize<S: Serializer>(v: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| Row(r)))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
        Ok(Vec::<Vec<IntOwned>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect())
    }
}

pub mod rat {
    use super::*;
    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        RatRef(v).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        RatOwned::deserialize(d).map(|x| x.0)
    }
}

pub mod rat_vec {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(RatRef))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        Ok(Vec::<RatOwned>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}

pub mod rat_mat {
    use super::*;
    struct Row<'a>(&'a [Rat]);
    impl Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(self.0.iter().map(RatRef))
        }
    }
    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| Row(r)))
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        Ok(Vec::<Vec<RatOwned>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect())
    }
}
