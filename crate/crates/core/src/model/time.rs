use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Precision {
    Year,
    Month,
    Day,
}

/// A calendar point at year, month or day precision (proleptic Gregorian).
///
/// Ordering is structural (`1996 < 1996-01 < 1996-01-01`) and only used for
/// tie-breaking; temporal comparisons go through [`TimePoint::first_day`] and
/// [`TimePoint::last_day`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimePoint {
    year: u16,
    month: Option<u8>,
    day: Option<u8>,
}

impl TimePoint {
    pub fn new(year: i32, month: Option<u32>, day: Option<u32>) -> Result<Self, ModelError> {
        let invalid = |field, message: String| ModelError::InvalidDate { field, message };
        if !(1..=9999).contains(&year) {
            return Err(invalid("year", format!("{year} outside 1..9999")));
        }
        if let Some(m) = month {
            if !(1..=12).contains(&m) {
                return Err(invalid("month", format!("{m} outside 1..12")));
            }
        }
        if let Some(d) = day {
            let Some(m) = month else {
                return Err(invalid("day", "given without a month".into()));
            };
            if NaiveDate::from_ymd_opt(year, m, d).is_none() {
                return Err(invalid("day", format!("{d} does not exist in {year:04}-{m:02}")));
            }
        }
        Ok(TimePoint {
            year: year as u16,
            month: month.map(|m| m as u8),
            day: day.map(|d| d as u8),
        })
    }

    /// Year-precision point.
    pub fn year(year: i32) -> Result<Self, ModelError> {
        Self::new(year, None, None)
    }

    pub fn ymd(year: i32, month: u32, day: u32) -> Result<Self, ModelError> {
        Self::new(year, Some(month), Some(day))
    }

    /// Day-precision point for a day number as returned by [`TimePoint::first_day`].
    pub fn from_day_number(day: i64) -> Option<Self> {
        let days = i32::try_from(day).ok()?;
        let date = NaiveDate::from_num_days_from_ce_opt(days)?;
        Self::ymd(date.year(), date.month(), date.day()).ok()
    }

    pub fn year_value(&self) -> i32 {
        self.year as i32
    }

    pub fn month_value(&self) -> Option<u32> {
        self.month.map(u32::from)
    }

    pub fn day_value(&self) -> Option<u32> {
        self.day.map(u32::from)
    }

    pub fn precision(&self) -> Precision {
        match (self.month, self.day) {
            (None, _) => Precision::Year,
            (Some(_), None) => Precision::Month,
            (Some(_), Some(_)) => Precision::Day,
        }
    }

    fn first_date(&self) -> NaiveDate {
        let y = self.year as i32;
        let m = self.month.unwrap_or(1) as u32;
        let d = self.day.unwrap_or(1) as u32;
        NaiveDate::from_ymd_opt(y, m, d).expect("validated on construction")
    }

    fn last_date(&self) -> NaiveDate {
        let y = self.year as i32;
        match (self.month, self.day) {
            (_, Some(d)) => NaiveDate::from_ymd_opt(y, self.month.unwrap() as u32, d as u32),
            (Some(m), None) => {
                let (ny, nm) = if m == 12 { (y + 1, 1) } else { (y, m as u32 + 1) };
                NaiveDate::from_ymd_opt(ny, nm, 1).and_then(|d| d.pred_opt())
            }
            (None, None) => NaiveDate::from_ymd_opt(y, 12, 31),
        }
        .expect("validated on construction")
    }

    /// Day number (days since 0001-01-01 counted from 1) of the first covered day.
    pub fn first_day(&self) -> i64 {
        self.first_date().num_days_from_ce() as i64
    }

    pub fn last_day(&self) -> i64 {
        self.last_date().num_days_from_ce() as i64
    }

    pub fn day_range(&self) -> DayRange {
        DayRange {
            first: self.first_day(),
            last: self.last_day(),
        }
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}", self.year)?;
        if let Some(m) = self.month {
            write!(f, "-{m:02}")?;
        }
        if let Some(d) = self.day {
            write!(f, "-{d:02}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TimePoint {
    type Err = ModelError;

    /// `YYYY`, `YYYY-MM` or `YYYY-MM-DD`, zero-padded.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || ModelError::InvalidDate {
            field: "point",
            message: format!("{s:?} is not YYYY[-MM[-DD]]"),
        };
        let mut parts = s.split('-');
        let mut next = |width: usize| -> Result<Option<u32>, ModelError> {
            match parts.next() {
                None => Ok(None),
                Some(p) if p.len() == width && p.bytes().all(|b| b.is_ascii_digit()) => {
                    Ok(Some(p.parse().map_err(|_| syntax())?))
                }
                Some(_) => Err(syntax()),
            }
        };
        let year = next(4)?.ok_or_else(syntax)?;
        let month = next(2)?;
        let day = next(2)?;
        if parts.next().is_some() {
            return Err(syntax());
        }
        TimePoint::new(year as i32, month, day)
    }
}

/// Closed range of day numbers. Unbounded sides use `i64::MIN` / `i64::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DayRange {
    pub first: i64,
    pub last: i64,
}

impl DayRange {
    pub const ALL: DayRange = DayRange {
        first: i64::MIN,
        last: i64::MAX,
    };

    pub fn contains_day(&self, day: i64) -> bool {
        self.first <= day && day <= self.last
    }

    pub fn contains(&self, other: &DayRange) -> bool {
        self.first <= other.first && other.last <= self.last
    }

    pub fn intersects(&self, other: &DayRange) -> bool {
        self.first <= other.last && other.first <= self.last
    }

    /// Overlapping, or one ends the day before the other starts.
    pub fn touches(&self, other: &DayRange) -> bool {
        let (a, b) = (*self, *other);
        a.intersects(&b)
            || a.last.checked_add(1) == Some(b.first)
            || b.last.checked_add(1) == Some(a.first)
    }
}

/// Closed interval between two optional time points.
///
/// A missing start means unbounded in the past, a missing end means still
/// valid. The instant `[t]` is the interval with `start == end == t`. Both
/// bounds missing is the whole timeline, which is usable as a query filter;
/// a statement with that validity is stored as [`Validity::Always`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeInterval {
    start: Option<TimePoint>,
    end: Option<TimePoint>,
}

impl TimeInterval {
    pub fn new(start: Option<TimePoint>, end: Option<TimePoint>) -> Result<Self, ModelError> {
        if let (Some(s), Some(e)) = (start, end) {
            if s.first_day() > e.last_day() {
                return Err(ModelError::InvalidInterval(format!("{s} is after {e}")));
            }
        }
        Ok(TimeInterval { start, end })
    }

    pub fn instant(t: TimePoint) -> Self {
        TimeInterval {
            start: Some(t),
            end: Some(t),
        }
    }

    pub fn unbounded() -> Self {
        TimeInterval {
            start: None,
            end: None,
        }
    }

    /// Year-precision closed interval, for the common `[Y1..Y2]` case.
    pub fn years(start: i32, end: i32) -> Result<Self, ModelError> {
        Self::new(Some(TimePoint::year(start)?), Some(TimePoint::year(end)?))
    }

    pub fn start(&self) -> Option<TimePoint> {
        self.start
    }

    pub fn end(&self) -> Option<TimePoint> {
        self.end
    }

    pub fn is_unbounded(&self) -> bool {
        self.start.is_none() && self.end.is_none()
    }

    pub fn is_instant(&self) -> bool {
        matches!((self.start, self.end), (Some(s), Some(e)) if s == e)
    }

    pub fn day_range(&self) -> DayRange {
        DayRange {
            first: self.start.map_or(i64::MIN, |s| s.first_day()),
            last: self.end.map_or(i64::MAX, |e| e.last_day()),
        }
    }

    /// Day-precision interval covering exactly the same days.
    pub fn normalized(&self) -> TimeInterval {
        let range = self.day_range();
        let bound = |day: i64| {
            if day == i64::MIN || day == i64::MAX {
                None
            } else {
                TimePoint::from_day_number(day)
            }
        };
        TimeInterval {
            start: bound(range.first),
            end: bound(range.last),
        }
    }

    /// Whether every day of `t` lies within this interval.
    pub fn contains(&self, t: &TimePoint) -> bool {
        self.day_range().contains(&t.day_range())
    }

    pub fn covers(&self, other: &TimeInterval) -> bool {
        self.day_range().contains(&other.day_range())
    }

    pub fn overlaps(&self, other: &TimeInterval) -> bool {
        self.day_range().intersects(&other.day_range())
    }

    /// Union of two intervals that overlap or are adjacent, keeping the
    /// precision of the bounds that delimit the union.
    pub fn merge_if_coalescable(&self, other: &TimeInterval) -> Option<TimeInterval> {
        if !self.day_range().touches(&other.day_range()) {
            return None;
        }
        let start = match (self.start, other.start) {
            (Some(a), Some(b)) => Some(std::cmp::min_by_key(a, b, |p| (p.first_day(), p.precision()))),
            _ => None,
        };
        let end = match (self.end, other.end) {
            (Some(a), Some(b)) => Some(std::cmp::max_by_key(a, b, |p| {
                (p.last_day(), std::cmp::Reverse(p.precision()))
            })),
            _ => None,
        };
        Some(TimeInterval { start, end })
    }
}

impl fmt::Display for TimeInterval {
    /// `1996..2000`, `2006..`, `..2000`, `..`, or a bare point for an instant.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_instant() {
            return write!(f, "{}", self.start.unwrap());
        }
        if let Some(s) = self.start {
            write!(f, "{s}")?;
        }
        f.write_str("..")?;
        if let Some(e) = self.end {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for TimeInterval {
    type Err = ModelError;

    /// Inverse of `Display`: `start..end` with either side omittable, or a
    /// single point meaning an instant.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once("..") {
            Some((a, b)) => {
                let bound = |p: &str| -> Result<Option<TimePoint>, ModelError> {
                    if p.is_empty() {
                        Ok(None)
                    } else {
                        p.parse().map(Some)
                    }
                };
                TimeInterval::new(bound(a)?, bound(b)?)
            }
            None => Ok(TimeInterval::instant(s.parse()?)),
        }
    }
}

/// Temporal qualification of a statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Validity {
    /// Not time-qualified.
    Always,
    During(TimeInterval),
}

impl Validity {
    /// `During`, collapsing the fully unbounded interval to `Always`.
    pub fn during(interval: TimeInterval) -> Self {
        if interval.is_unbounded() {
            Validity::Always
        } else {
            Validity::During(interval)
        }
    }

    pub fn interval(&self) -> Option<&TimeInterval> {
        match self {
            Validity::Always => None,
            Validity::During(iv) => Some(iv),
        }
    }

    pub fn day_range(&self) -> DayRange {
        match self {
            Validity::Always => DayRange::ALL,
            Validity::During(iv) => iv.day_range(),
        }
    }

    pub fn contains(&self, t: &TimePoint) -> bool {
        self.day_range().contains(&t.day_range())
    }

    pub fn overlaps(&self, iv: &TimeInterval) -> bool {
        self.day_range().intersects(&iv.day_range())
    }

    pub fn covers(&self, iv: &TimeInterval) -> bool {
        self.day_range().contains(&iv.day_range())
    }

    pub fn start(&self) -> Option<TimePoint> {
        self.interval().and_then(|iv| iv.start())
    }

    pub fn end(&self) -> Option<TimePoint> {
        self.interval().and_then(|iv| iv.end())
    }

    pub fn merge(&self, other: &Validity) -> Option<Validity> {
        match (self, other) {
            (Validity::During(a), Validity::During(b)) => a.merge_if_coalescable(b).map(Validity::during),
            _ => Some(Validity::Always),
        }
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Validity::Always => f.write_str("always"),
            Validity::During(iv) => write!(f, "{iv}"),
        }
    }
}
