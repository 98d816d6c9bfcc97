pub mod beta;
pub mod collapse;
pub mod corpus;
pub mod dovetail;
pub mod run;
pub mod universe;

use std::io::Write;

use crate::manifest::Manifest;
use crate::output::{Format, Table};

pub struct Ctx<'a> {
    pub format: Format,
    pub manifest: Manifest,
    pub out: &'a mut dyn Write,
}

impl<'a> Ctx<'a> {
    pub fn table(&mut self, columns: &[&'static str]) -> std::io::Result<Table<&mut dyn Write>> {
        Table::new(self.format, columns, &mut *self.out)
    }
}

/// Parses `a..b` (exclusive), `a..=b` or a single number.
pub fn parse_range(s: &str) -> Result<std::ops::Range<u64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("bad range `{s}`"))
    };
    if let Some((a, b)) = s.split_once("..=") {
        Ok(num(a)?..num(b)? + 1)
    } else if let Some((a, b)) = s.split_once("..") {
        Ok(num(a)?..num(b)?)
    } else {
        let n = num(s)?;
        Ok(n..n + 1)
    }
}
