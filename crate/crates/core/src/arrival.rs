//! Random arrival streams: `n` items, each arriving `k` times.
//!
//! Two models are supported. In the permutation model the `kn` arrivals form a
//! uniformly random multiset permutation. In the timed model every arrival of
//! every item gets an independent uniform timestamp in `[0, 1)` and rounds
//! follow time order.

use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ItemId(pub usize);

impl ItemId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for ItemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One arrival. `round` and `occurrence` are 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalEvent {
    pub item: ItemId,
    pub occurrence: u32,
    pub round: usize,
    pub time: Option<f64>,
}

/// An immutable, validated arrival stream of length `k * n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalSequence {
    n: usize,
    k: usize,
    events: Vec<ArrivalEvent>,
}

fn check_dims(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return invalid("item count n must be at least 1");
    }
    if k == 0 {
        return invalid("arrivals per item k must be at least 1");
    }
    Ok(())
}

impl ArrivalSequence {
    /// Builds an untimed sequence from the item labels in arrival order.
    pub fn from_items(n: usize, k: usize, items: &[usize]) -> Result<Self> {
        Self::build(n, k, items.iter().map(|&i| (i, None)))
    }

    /// Builds a timed sequence from `(item, time)` pairs already sorted by time.
    pub fn from_timed(n: usize, k: usize, arrivals: &[(usize, f64)]) -> Result<Self> {
        for w in arrivals.windows(2) {
            if w[0].1.partial_cmp(&w[1].1) != Some(std::cmp::Ordering::Less) {
                return invalid("timestamps must be distinct and strictly increasing");
            }
        }
        if let Some(&(_, t)) = arrivals.iter().find(|&&(_, t)| !(0.0..1.0).contains(&t)) {
            return invalid(format!("timestamp {t} outside [0, 1)"));
        }
        Self::build(n, k, arrivals.iter().map(|&(i, t)| (i, Some(t))))
    }

    fn build(
        n: usize,
        k: usize,
        arrivals: impl Iterator<Item = (usize, Option<f64>)>,
    ) -> Result<Self> {
        check_dims(n, k)?;
        let mut counts = vec![0u32; n];
        let mut events = Vec::with_capacity(n * k);
        for (idx, (item, time)) in arrivals.enumerate() {
            if item >= n {
                return invalid(format!("item {item} out of range for n = {n}"));
            }
            counts[item] += 1;
            if counts[item] as usize > k {
                return invalid(format!("item {item} arrives more than k = {k} times"));
            }
            events.push(ArrivalEvent {
                item: ItemId(item),
                occurrence: counts[item],
                round: idx + 1,
                time,
            });
        }
        if events.len() != n * k {
            return invalid(format!("expected {} arrivals, got {}", n * k, events.len()));
        }
        let timed = events[0].time.is_some();
        if events.iter().any(|e| e.time.is_some() != timed) {
            return invalid("either every arrival or none carries a timestamp");
        }
        Ok(Self { n, k, events })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn is_timed(&self) -> bool {
        self.events[0].time.is_some()
    }

    pub fn events(&self) -> &[ArrivalEvent] {
        &self.events
    }

    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.events.iter().map(|e| e.item)
    }

    /// Number of distinct items among the first `r` events.
    pub fn distinct_count_prefix(&self, r: usize) -> Result<usize> {
        if r == 0 || r > self.events.len() {
            return invalid(format!("round {r} outside [1, {}]", self.events.len()));
        }
        Ok(self.events[..r]
            .iter()
            .filter(|e| e.occurrence == 1)
            .count())
    }

    /// Items whose arrivals among the first `r` events number exactly one.
    pub fn arrived_once_by(&self, r: usize) -> Vec<ItemId> {
        let mut counts = vec![0u32; self.n];
        for e in &self.events[..r.min(self.events.len())] {
            counts[e.item.0] += 1;
        }
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(i, _)| ItemId(i))
            .collect()
    }

    /// Writes the `round,item,occurrence,time` CSV form.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["round", "item", "occurrence", "time"])?;
        for e in &self.events {
            let time = e.time.map(|t| format!("{t:?}")).unwrap_or_default();
            w.write_record([
                e.round.to_string(),
                e.item.to_string(),
                e.occurrence.to_string(),
                time,
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV form back. `n` is inferred from the largest item label and
    /// `k` from the occurrence counts.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        if header.iter().collect::<Vec<_>>() != ["round", "item", "occurrence", "time"] {
            return Err(Error::Parse {
                line: 1,
                msg: "expected header round,item,occurrence,time".into(),
            });
        }
        let mut rows: Vec<(usize, Option<f64>)> = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let parse_err = |msg: &str| Error::Parse {
                line,
                msg: msg.to_string(),
            };
            let round: usize = rec[0].parse().map_err(|_| parse_err("bad round"))?;
            if round != i + 1 {
                return Err(parse_err("rounds must be 1..kn without gaps"));
            }
            let item: usize = rec[1].parse().map_err(|_| parse_err("bad item"))?;
            let time = match &rec[3] {
                "" => None,
                s => Some(s.parse::<f64>().map_err(|_| parse_err("bad time"))?),
            };
            rows.push((item, time));
        }
        let n = rows.iter().map(|r| r.0).max().map_or(0, |m| m + 1);
        let k = rows.len().checked_div(n).unwrap_or(0);
        if rows.iter().all(|r| r.1.is_some()) && !rows.is_empty() {
            let timed: Vec<(usize, f64)> = rows.iter().map(|&(i, t)| (i, t.unwrap())).collect();
            Self::from_timed(n, k, &timed)
        } else {
            let items: Vec<usize> = rows.iter().map(|r| r.0).collect();
            Self::from_items(n, k, &items)
        }
    }
}

/// Uniform multiset permutation of `k` copies of each of `n` items.
pub fn gen_permutation_sequence(n: usize, k: usize, seed: u64) -> Result<ArrivalSequence> {
    permutation_sequence_with(n, k, &mut rng::seeded(seed))
}

pub fn permutation_sequence_with<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<ArrivalSequence> {
    check_dims(n, k)?;
    let mut items: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, k)).collect();
    items.shuffle(rng);
    ArrivalSequence::from_items(n, k, &items)
}

/// Timed sequence: `k` independent uniform timestamps per item.
pub fn gen_timed_sequence(n: usize, k: usize, seed: u64) -> Result<ArrivalSequence> {
    timed_sequence_with(n, k, &mut rng::seeded(seed))
}

pub fn timed_sequence_with<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<ArrivalSequence> {
    check_dims(n, k)?;
    let mut draws: Vec<(f64, usize)> = (0..n)
        .flat_map(|i| std::iter::repeat_n(i, k))
        .map(|i| (rng.gen::<f64>(), i))
        .collect();
    loop {
        draws.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut collided = false;
        for j in 1..draws.len() {
            if draws[j].0 == draws[j - 1].0 {
                draws[j].0 = rng.gen::<f64>();
                collided = true;
            }
        }
        if !collided {
            break;
        }
    }
    let arrivals: Vec<(usize, f64)> = draws.into_iter().map(|(t, i)| (i, t)).collect();
    ArrivalSequence::from_timed(n, k, &arrivals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_item_has_one_order() {
        let s = gen_permutation_sequence(1, 2, 42).unwrap();
        let ev: Vec<(usize, u32, usize)> = s
            .events()
            .iter()
            .map(|e| (e.item.0, e.occurrence, e.round))
            .collect();
        assert_eq!(ev, vec![(0, 1, 1), (0, 2, 2)]);
    }

    #[test]
    fn each_item_appears_k_times() {
        for seed in 0..20 {
            let s = gen_permutation_sequence(7, 3, seed).unwrap();
            assert_eq!(s.len(), 21);
            let mut counts = [0; 7];
            for e in s.events() {
                counts[e.item.0] += 1;
            }
            assert!(counts.iter().all(|&c| c == 3));
        }
    }

    #[test]
    fn zero_dimensions_rejected() {
        assert!(matches!(
            gen_permutation_sequence(0, 2, 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            gen_permutation_sequence(2, 0, 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(gen_timed_sequence(0, 2, 1).is_err());
        assert!(gen_timed_sequence(3, 0, 1).is_err());
    }

    #[test]
    fn timed_single_item_is_sorted() {
        let s = gen_timed_sequence(1, 2, 5).unwrap();
        let t: Vec<f64> = s.events().iter().map(|e| e.time.unwrap()).collect();
        assert!(t[0] < t[1] && t[0] >= 0.0 && t[1] < 1.0);
        assert_eq!(s.events()[1].occurrence, 2);
    }

    #[test]
    fn distinct_count_examples() {
        let s = ArrivalSequence::from_items(3, 2, &[0, 1, 0, 2, 1, 2]).unwrap();
        assert_eq!(s.distinct_count_prefix(1).unwrap(), 1);
        assert_eq!(s.distinct_count_prefix(4).unwrap(), 3);
        assert_eq!(s.distinct_count_prefix(6).unwrap(), 3);
        assert!(s.distinct_count_prefix(0).is_err());
        assert!(s.distinct_count_prefix(7).is_err());

        let one = gen_permutation_sequence(1, 2, 0).unwrap();
        assert_eq!(one.distinct_count_prefix(2).unwrap(), 1);
    }

    #[test]
    fn arrived_once_counts_singletons() {
        let s = ArrivalSequence::from_items(3, 2, &[0, 1, 0, 2, 1, 2]).unwrap();
        assert_eq!(s.arrived_once_by(3), vec![ItemId(1)]);
        assert_eq!(s.arrived_once_by(4), vec![ItemId(1), ItemId(2)]);
    }

    #[test]
    fn malformed_sequences_rejected() {
        assert!(ArrivalSequence::from_items(2, 2, &[0, 0, 0, 1]).is_err());
        assert!(ArrivalSequence::from_items(2, 2, &[0, 1, 1]).is_err());
        assert!(ArrivalSequence::from_items(2, 2, &[0, 1, 2, 1]).is_err());
        assert!(ArrivalSequence::from_timed(1, 2, &[(0, 0.5), (0, 0.5)]).is_err());
        assert!(ArrivalSequence::from_timed(1, 2, &[(0, 0.5), (0, 1.5)]).is_err());
    }

    #[test]
    fn csv_round_trip_and_header() {
        let s = gen_timed_sequence(4, 2, 11).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("round,item,occurrence,time\n"));
        assert_eq!(ArrivalSequence::read_csv(&buf[..]).unwrap(), s);

        let u = ArrivalSequence::from_items(2, 2, &[1, 0, 0, 1]).unwrap();
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "round,item,occurrence,time\n1,1,1,\n2,0,1,\n3,0,2,\n4,1,2,\n"
        );
        assert_eq!(ArrivalSequence::read_csv(&buf[..]).unwrap(), u);
    }
}
