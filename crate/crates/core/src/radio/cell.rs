use super::{
    dl_duration, ul_duration, CellConfig, Direction, RadioError, RadioMessage, RandomAccessChannel,
    UeContext,
};
use crate::metrics::{MetricsError, TrafficLedger};
use crate::sim::SimTime;

/// A single carrier served first-come first-served.
#[derive(Debug, Clone, Copy, Default)]
pub struct SharedCarrier {
    free_at: SimTime,
}

impl SharedCarrier {
    pub fn free_at(&self) -> SimTime {
        self.free_at
    }

    /// Books `duration` starting no earlier than `earliest`. Returns
    /// `(start, end)`.
    pub fn reserve(&mut self, earliest: SimTime, duration: SimTime) -> (SimTime, SimTime) {
        let start = earliest.max(self.free_at);
        let end = start + duration;
        self.free_at = end;
        (start, end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlOutcome {
    Scheduled { start: SimTime, delivered: SimTime },
    /// UE is idle; held until its next connection.
    Held,
    /// UE is idle and its hold queue is full; the message is discarded.
    Overflow,
}

#[derive(Debug, thiserror::Error)]
pub enum CellError {
    #[error(transparent)]
    Radio(#[from] RadioError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// One eNB cell: an NPRACH channel plus one UL and one DL carrier.
#[derive(Debug, Clone)]
pub struct Cell {
    pub cfg: CellConfig,
    pub ul: SharedCarrier,
    pub dl: SharedCarrier,
    pub nprach: RandomAccessChannel,
}

fn expect_direction(msg: &RadioMessage, expected: Direction) -> Result<(), RadioError> {
    if msg.direction != expected {
        return Err(RadioError::WrongDirection {
            id: msg.id,
            direction: msg.direction,
            expected,
        });
    }
    Ok(())
}

impl Cell {
    pub fn new(cfg: CellConfig) -> Self {
        let nprach = RandomAccessChannel::new(cfg.nprach_period, cfg.preamble_pool);
        Cell {
            cfg,
            ul: SharedCarrier::default(),
            dl: SharedCarrier::default(),
            nprach,
        }
    }

    /// Schedules an NPUSCH transfer for a connected UE and returns the time
    /// the eNB has received it.
    pub fn transmit_ul(
        &mut self,
        ue: &UeContext,
        msg: &RadioMessage,
        now: SimTime,
        ledger: &mut TrafficLedger,
    ) -> Result<SimTime, CellError> {
        expect_direction(msg, Direction::Ul)?;
        if !ue.is_connected() {
            return Err(RadioError::UlWhileIdle { ue: ue.id }.into());
        }
        let (_, end) = self
            .ul
            .reserve(now, ul_duration(msg.total_bytes(), ue.ce_level, &self.cfg));
        ledger.record_message(msg)?;
        Ok(end)
    }

    /// CP-CIoT: sends `msg` inside RRC Connection Setup Complete. It is
    /// delivered together with the access completion at `ra_done`, with no
    /// separate NPUSCH grant.
    pub fn piggyback_ul(
        &mut self,
        ue: &mut UeContext,
        msg: &RadioMessage,
        ra_done: SimTime,
        ledger: &mut TrafficLedger,
    ) -> Result<SimTime, CellError> {
        expect_direction(msg, Direction::Ul)?;
        if !ue.cp_ciot_enabled || msg.total_bytes() > ue.cp_ciot_max_bytes {
            return Err(RadioError::PiggybackTooLarge {
                ue: ue.id,
                bytes: msg.total_bytes(),
                limit: if ue.cp_ciot_enabled { ue.cp_ciot_max_bytes } else { 0 },
            }
            .into());
        }
        if ue.piggyback_used {
            return Err(RadioError::PiggybackUsed { ue: ue.id }.into());
        }
        ue.piggyback_used = true;
        ledger.record_message(msg)?;
        Ok(ra_done)
    }

    /// Signaling transfers are allowed in either RRC state.
    pub fn signaling(
        &mut self,
        ue: &UeContext,
        msg: &RadioMessage,
        earliest: SimTime,
        ledger: &mut TrafficLedger,
    ) -> Result<SimTime, CellError> {
        let end = match msg.direction {
            Direction::Ul => {
                self.ul
                    .reserve(earliest, ul_duration(msg.total_bytes(), ue.ce_level, &self.cfg))
                    .1
            }
            Direction::Dl => {
                self.dl
                    .reserve(earliest, dl_duration(msg.total_bytes(), ue.ce_level, &self.cfg))
                    .1
            }
        };
        ledger.record_message(msg)?;
        Ok(end)
    }

    /// Schedules a PDSCH transfer, or holds the message while the UE is idle.
    pub fn deliver_dl(
        &mut self,
        ue: &mut UeContext,
        msg: &RadioMessage,
        now: SimTime,
        ledger: &mut TrafficLedger,
    ) -> Result<DlOutcome, CellError> {
        expect_direction(msg, Direction::Dl)?;
        if !ue.is_connected() {
            if ue.held_dl.len() >= ue.held_dl_capacity {
                ue.dl_overflow += 1;
                return Ok(DlOutcome::Overflow);
            }
            ue.held_dl.push_back(msg.clone());
            return Ok(DlOutcome::Held);
        }
        let (start, delivered) = self
            .dl
            .reserve(now, dl_duration(msg.total_bytes(), ue.ce_level, &self.cfg));
        ledger.record_message(msg)?;
        Ok(DlOutcome::Scheduled { start, delivered })
    }

    /// Sends everything held for a UE that has just connected.
    pub fn flush_held_dl(
        &mut self,
        ue: &mut UeContext,
        now: SimTime,
        ledger: &mut TrafficLedger,
    ) -> Result<Vec<(RadioMessage, SimTime)>, CellError> {
        let mut out = Vec::with_capacity(ue.held_dl.len());
        while let Some(msg) = ue.held_dl.pop_front() {
            match self.deliver_dl(ue, &msg, now, ledger)? {
                DlOutcome::Scheduled { delivered, .. } => out.push((msg, delivered)),
                DlOutcome::Held | DlOutcome::Overflow => {
                    unreachable!("flush is only called for connected UEs")
                }
            }
        }
        Ok(out)
    }
}
