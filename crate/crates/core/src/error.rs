use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::item::ItemId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Surprise is undefined without at least one reference item.
    EmptyExposure,
    DuplicateItem(ItemId),
    /// A sequence or candidate contains an item the user already knows.
    ItemExposed(ItemId),
    /// A sequence item is not drawn from the unknown set.
    NotUnknown(ItemId),
    InvalidLength {
        requested: usize,
        available: usize,
    },
    UnknownItem(ItemId),
    MissingItems(Vec<ItemId>),
    DimensionMismatch {
        left: usize,
        right: usize,
    },
    EmptyVector,
    ZeroVector,
    NegativeComponent {
        index: usize,
        value: f64,
    },
    /// Log-ratio distances need strictly positive parts; smooth first.
    NonPositiveComponent {
        index: usize,
        value: f64,
    },
    NonFiniteComponent {
        index: usize,
    },
    AllZero,
    InvalidVector {
        item: ItemId,
        reason: Box<Error>,
    },
    DuplicateRepresentation(ItemId),
    InvalidDistance {
        a: ItemId,
        b: ItemId,
        value: f64,
    },
    /// The kind needs an NPMI model rather than item vectors, or vice versa.
    IncompatibleKind(&'static str),
    EnumerationBudget {
        items: usize,
        length: usize,
        limit: u64,
    },
    InvalidParameter(&'static str),
    MalformedMatrix(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyExposure => f.write_str("exposed set is empty; surprise needs at least one known item"),
            Error::DuplicateItem(id) => write!(f, "item {id} appears more than once in the sequence"),
            Error::ItemExposed(id) => write!(f, "item {id} is already in the exposed set"),
            Error::NotUnknown(id) => write!(f, "item {id} is not in the unknown set"),
            Error::InvalidLength { requested, available } => {
                write!(f, "requested length {requested} but only {available} items are available")
            }
            Error::UnknownItem(id) => write!(f, "no representation for item {id}"),
            Error::MissingItems(ids) => {
                f.write_str("no representation for items:")?;
                for id in ids {
                    write!(f, " {id}")?;
                }
                Ok(())
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "vector dimensions differ ({left} vs {right})")
            }
            Error::EmptyVector => f.write_str("vector has no components"),
            Error::ZeroVector => f.write_str("zero vector has no direction"),
            Error::NegativeComponent { index, value } => {
                write!(f, "component {index} is negative ({value})")
            }
            Error::NonPositiveComponent { index, value } => write!(
                f,
                "component {index} is not strictly positive ({value}); apply zero replacement first"
            ),
            Error::NonFiniteComponent { index } => write!(f, "component {index} is not finite"),
            Error::AllZero => f.write_str("vector sums to zero"),
            Error::InvalidVector { item, reason } => write!(f, "vector for item {item}: {reason}"),
            Error::DuplicateRepresentation(id) => write!(f, "item {id} is represented more than once"),
            Error::InvalidDistance { a, b, value } => {
                write!(f, "distance between {a} and {b} is invalid ({value})")
            }
            Error::IncompatibleKind(msg) => f.write_str(msg),
            Error::EnumerationBudget { items, length, limit } => write!(
                f,
                "enumerating {length}-arrangements of {items} items exceeds the budget of {limit}; use greedy_bounds instead"
            ),
            Error::InvalidParameter(msg) => f.write_str(msg),
            Error::MalformedMatrix(msg) => write!(f, "malformed distance matrix: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
