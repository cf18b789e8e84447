use std::collections::{BTreeMap, HashSet};

use super::MetricsError;
use crate::crypto::Digest;
use crate::radio::{Direction, MessageId, MsgClass, RadioMessage};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounter {
    pub messages: u64,
    pub bytes: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TxBytes {
    pub ul_bytes: u64,
    pub dl_bytes: u64,
}

/// Byte counters per direction and message class, plus per-transaction data
/// bytes. Every message may be recorded once.
#[derive(Debug, Clone, Default)]
pub struct TrafficLedger {
    counters: BTreeMap<(Direction, MsgClass), ClassCounter>,
    per_tx: BTreeMap<Digest, TxBytes>,
    recorded: HashSet<MessageId>,
}

impl TrafficLedger {
    pub fn record_message(&mut self, msg: &RadioMessage) -> Result<(), MetricsError> {
        if !self.recorded.insert(msg.id) {
            return Err(MetricsError::DuplicateRecord(msg.id));
        }
        let bytes = u64::from(msg.total_bytes());
        let c = self.counters.entry((msg.direction, msg.class)).or_default();
        c.messages += 1;
        c.bytes += bytes;
        if let (true, Some(tx)) = (msg.class.is_data(), msg.tx) {
            let t = self.per_tx.entry(tx).or_default();
            match msg.direction {
                Direction::Ul => t.ul_bytes += bytes,
                Direction::Dl => t.dl_bytes += bytes,
            }
        }
        Ok(())
    }

    pub fn counter(&self, direction: Direction, class: MsgClass) -> ClassCounter {
        self.counters
            .get(&(direction, class))
            .copied()
            .unwrap_or_default()
    }

    pub fn counters(&self) -> impl Iterator<Item = (Direction, MsgClass, ClassCounter)> + '_ {
        self.counters.iter().map(|(&(d, c), &v)| (d, c, v))
    }

    pub fn tx_bytes(&self, tx: &Digest) -> TxBytes {
        self.per_tx.get(tx).copied().unwrap_or_default()
    }

    pub fn per_tx(&self) -> impl Iterator<Item = (&Digest, &TxBytes)> {
        self.per_tx.iter()
    }

    pub fn total_bytes(&self) -> u64 {
        self.counters.values().map(|c| c.bytes).sum()
    }

    pub fn direction_bytes(&self, direction: Direction) -> u64 {
        self.counters()
            .filter(|(d, _, _)| *d == direction)
            .map(|(_, _, c)| c.bytes)
            .sum()
    }

    pub fn data_bytes(&self, direction: Direction) -> u64 {
        self.counters()
            .filter(|(d, c, _)| *d == direction && c.is_data())
            .map(|(_, _, c)| c.bytes)
            .sum()
    }

    pub fn signaling_bytes(&self) -> u64 {
        self.counters()
            .filter(|(_, c, _)| !c.is_data())
            .map(|(_, _, c)| c.bytes)
            .sum()
    }

    /// Mean over transactions of `ul_bytes / dl_bytes`. Transactions without
    /// DL data are skipped; `None` if no transaction has DL data.
    pub fn ul_dl_ratio(&self) -> Option<f64> {
        let ratios: Vec<f64> = self
            .per_tx
            .values()
            .filter(|t| t.dl_bytes > 0)
            .map(|t| t.ul_bytes as f64 / t.dl_bytes as f64)
            .collect();
        if ratios.is_empty() {
            return None;
        }
        Some(ratios.iter().sum::<f64>() / ratios.len() as f64)
    }

    /// Total UL data bytes over total DL data bytes.
    pub fn ul_dl_ratio_of_totals(&self) -> Option<f64> {
        let dl = self.data_bytes(Direction::Dl);
        (dl > 0).then(|| self.data_bytes(Direction::Ul) as f64 / dl as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crypto::digest;
    use crate::sim::ActorId;

    fn msg(id: u64, dir: Direction, class: MsgClass, bytes: u32, tx: Option<Digest>) -> RadioMessage {
        match dir {
            Direction::Ul => RadioMessage::ul(MessageId(id), ActorId::Ue(0), class, bytes, 0, tx),
            Direction::Dl => RadioMessage::dl(MessageId(id), ActorId::Ue(0), class, bytes, 0, tx),
        }
    }

    #[test]
    fn data_message_counts() {
        let mut l = TrafficLedger::default();
        l.record_message(&msg(1, Direction::Ul, MsgClass::Proposal, 110, None))
            .unwrap();
        assert_eq!(l.data_bytes(Direction::Ul), 110);
    }

    #[test]
    fn signaling_is_excluded_from_data() {
        let mut l = TrafficLedger::default();
        let tx = Some(digest(b"t"));
        l.record_message(&msg(1, Direction::Ul, MsgClass::Signaling, 20, tx))
            .unwrap();
        assert_eq!(l.data_bytes(Direction::Ul), 0);
        assert_eq!(l.signaling_bytes(), 20);
        assert_eq!(l.tx_bytes(&digest(b"t")), TxBytes::default());
    }

    #[test]
    fn double_record_rejected() {
        let mut l = TrafficLedger::default();
        let m = msg(1, Direction::Ul, MsgClass::Proposal, 10, None);
        l.record_message(&m).unwrap();
        assert!(matches!(
            l.record_message(&m),
            Err(MetricsError::DuplicateRecord(MessageId(1)))
        ));
        assert_eq!(l.total_bytes(), 10);
    }

    #[test]
    fn ratio_per_tx() {
        let mut l = TrafficLedger::default();
        for i in 0..4u64 {
            let tx = Some(digest(&i.to_le_bytes()));
            l.record_message(&msg(2 * i, Direction::Ul, MsgClass::Proposal, 100, tx))
                .unwrap();
            l.record_message(&msg(2 * i + 1, Direction::Dl, MsgClass::Confirmation, 200, tx))
                .unwrap();
        }
        assert_eq!(l.ul_dl_ratio(), Some(0.5));
        assert_eq!(l.ul_dl_ratio_of_totals(), Some(0.5));
    }

    #[test]
    fn ratio_absent_without_dl() {
        let mut l = TrafficLedger::default();
        l.record_message(&msg(1, Direction::Ul, MsgClass::Proposal, 100, Some(digest(b"x"))))
            .unwrap();
        assert_eq!(l.ul_dl_ratio(), None);
        assert_eq!(l.ul_dl_ratio_of_totals(), None);
    }

    #[test]
    fn ratio_mean_differs_from_totals() {
        let mut l = TrafficLedger::default();
        let (a, b) = (Some(digest(b"a")), Some(digest(b"b")));
        l.record_message(&msg(1, Direction::Ul, MsgClass::Proposal, 100, a)).unwrap();
        l.record_message(&msg(2, Direction::Dl, MsgClass::Confirmation, 100, a)).unwrap();
        l.record_message(&msg(3, Direction::Ul, MsgClass::Proposal, 100, b)).unwrap();
        l.record_message(&msg(4, Direction::Dl, MsgClass::Confirmation, 300, b)).unwrap();
        assert_eq!(l.ul_dl_ratio(), Some((1.0 + 1.0 / 3.0) / 2.0));
        assert_eq!(l.ul_dl_ratio_of_totals(), Some(0.5));
    }
}
