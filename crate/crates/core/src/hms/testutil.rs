//! Shared fixtures for unit tests: the two worked single-agent models over
//! {p, q} and an awareness-function variant of the right one.

use super::io::hms_from_json;
use super::model::HmsModel;

pub(crate) const FIG1_LEFT: &str = include_str!("../../tests/fixtures/fig1-left.json");
pub(crate) const FIG1_RIGHT: &str = include_str!("../../tests/fixtures/fig1-right.json");
pub(crate) const FIG1_RIGHT_IKB: &str = include_str!("../../tests/fixtures/fig1-right-ikb.json");

pub(crate) fn fig1_left() -> HmsModel {
    hms_from_json(FIG1_LEFT).unwrap()
}

pub(crate) fn fig1_right() -> HmsModel {
    hms_from_json(FIG1_RIGHT).unwrap()
}

pub(crate) fn fig1_right_ikb() -> HmsModel {
    hms_from_json(FIG1_RIGHT_IKB).unwrap()
}
