//! The simulated system: sensors on NB-IoT UEs, one eNB cell, the ledger
//! network (endorsing peers, orderer, committers) and, in baseline mode, a
//! plain application server.

use std::collections::HashMap;

use rand::Rng;

use super::{Mode, ScenarioConfig, SensorModel};
use crate::crypto::{Digest, KeyPair, DIGEST_LEN};
use crate::ledger::{
    endorse, response_payload_bytes, select_peers, Block, ChainError, Confirmer, CutBatch, Endorsement,
    EndorsedTransaction, EndorsementPolicy, Ledger, Membership, Orderer, Peer, Rejection,
    SmartContract, SubmitOutcome, TransactionProposal, TxPayload, TxValidity, READING_RECORD_LEN,
};
use crate::metrics::{
    e2e_stats, E2eStats, LatencyRecord, PerTxRow, RunSummary, TrafficLedger,
};
use crate::radio::{
    acquire_system_info, Cell, CellError, Direction, DlOutcome, MessageId, MsgClass, RadioMessage,
    UeContext,
};
use crate::sim::{ActorId, Engine, EventPayload, RunTrace, SimError, SimTime};

pub const STREAMS: [&str; 5] = ["phase", "preamble", "backoff", "peer-selection", "sensor-noise"];

#[derive(Debug, Clone)]
pub enum Ev {
    PowerOn,
    SyncComplete,
    Generate,
    RaResolve { occasion: SimTime },
    AccessComplete,
    SetupComplete,
    UlDelivered { msg: MessageId },
    DlAtEnb { msg: MessageId },
    DlDelivered { msg: MessageId },
    PeerProposal { tx: Digest },
    PeerRespond { tx: Digest, outcome: Result<Endorsement, Rejection> },
    OrdererArrival { etx: Box<EndorsedTransaction> },
    BatchTimeout { epoch: u64 },
    BlockReady { block: Box<Block> },
    Commit { block: Box<Block> },
    ServerArrival { tx: Digest },
    InactivityCheck { since: SimTime },
}

impl EventPayload for Ev {
    fn kind(&self) -> &'static str {
        match self {
            Ev::PowerOn => "power_on",
            Ev::SyncComplete => "sync_complete",
            Ev::Generate => "generate",
            Ev::RaResolve { .. } => "ra_resolve",
            Ev::AccessComplete => "access_complete",
            Ev::SetupComplete => "setup_complete",
            Ev::UlDelivered { .. } => "ul_delivered",
            Ev::DlAtEnb { .. } => "dl_at_enb",
            Ev::DlDelivered { .. } => "dl_delivered",
            Ev::PeerProposal { .. } => "peer_proposal",
            Ev::PeerRespond { .. } => "peer_respond",
            Ev::OrdererArrival { .. } => "orderer_arrival",
            Ev::BatchTimeout { .. } => "batch_timeout",
            Ev::BlockReady { .. } => "block_ready",
            Ev::Commit { .. } => "commit",
            Ev::ServerArrival { .. } => "server_arrival",
            Ev::InactivityCheck { .. } => "inactivity_check",
        }
    }

    fn detail(&self) -> String {
        fn short(d: &Digest) -> String {
            d.to_hex()[..12].to_string()
        }
        match self {
            Ev::RaResolve { occasion } => format!("occasion={}", occasion.as_us()),
            Ev::UlDelivered { msg } | Ev::DlAtEnb { msg } | Ev::DlDelivered { msg } => {
                format!("msg={}", msg.0)
            }
            Ev::PeerProposal { tx } | Ev::ServerArrival { tx } => format!("tx={}", short(tx)),
            Ev::PeerRespond { tx, outcome } => match outcome {
                Ok(_) => format!("tx={} ok", short(tx)),
                Err(r) => format!("tx={} {r}", short(tx)),
            },
            Ev::OrdererArrival { etx } => format!("tx={}", short(&etx.tx_id())),
            Ev::BatchTimeout { epoch } => format!("epoch={epoch}"),
            Ev::BlockReady { block } | Ev::Commit { block } => {
                format!("height={} txs={}", block.height, block.txs.len())
            }
            Ev::InactivityCheck { since } => format!("since={}", since.as_us()),
            _ => String::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// One alarm raised by the contract.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AlarmLog {
    pub raised_at: SimTime,
    pub sensor: ActorId,
    pub mean_ppm: f64,
    pub reading_index: u64,
    pub trigger_height: u64,
    pub alarm_tx: Digest,
    pub committed_height: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pending,
    Committed,
    Rejected,
    Dropped,
}

/// What a radio message carries, keyed by its id while in flight.
#[derive(Debug, Clone)]
enum Content {
    Proposal { tx: Digest },
    Response { tx: Digest, endorsement: Option<Endorsement> },
    Submit { etx: Box<EndorsedTransaction> },
    Confirmation { covers: Vec<Digest> },
    BaselineData { tx: Digest },
    BaselineAck { tx: Digest },
}

/// Client-side state of a reading between proposal and submission.
#[derive(Debug)]
struct ClientTx {
    proposal: TransactionProposal,
    peers: Vec<ActorId>,
    responses: Vec<Option<Endorsement>>,
}

struct Device {
    key: KeyPair,
    seq: u32,
}

/// Everything a finished run produced.
#[derive(Debug)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub per_tx: Vec<PerTxRow>,
    pub records: Vec<LatencyRecord>,
    pub stats: Option<E2eStats>,
    pub blocks: Vec<Block>,
    pub validity: Vec<Vec<TxValidity>>,
    pub alarms: Vec<AlarmLog>,
    pub traffic: TrafficLedger,
    pub trace: RunTrace,
    pub end_time: SimTime,
}

fn ue_index(id: ActorId) -> usize {
    match id {
        ActorId::Ue(i) => i as usize,
        other => panic!("{other} is not a UE"),
    }
}

pub struct World {
    cfg: ScenarioConfig,
    cell: Cell,
    ues: Vec<UeContext>,
    devices: Vec<Device>,
    peers: Vec<Peer>,
    membership: Membership,
    policy: EndorsementPolicy,
    orderer: Orderer,
    ledger: Ledger,
    confirmer: Confirmer,
    contract_key: KeyPair,
    traffic: TrafficLedger,
    records: Vec<LatencyRecord>,
    index: HashMap<Digest, usize>,
    status: Vec<Status>,
    client_tx: HashMap<Digest, ClientTx>,
    transit: HashMap<MessageId, (RadioMessage, Content)>,
    next_msg: u64,
    next_nonce: u64,
    generated: u64,
    ra_failures: u64,
    confirmations: u64,
    alarms: Vec<AlarmLog>,
    alarm_index: HashMap<Digest, usize>,
}

impl World {
    pub fn new(cfg: ScenarioConfig) -> Self {
        let mut membership = Membership::default();
        let devices: Vec<Device> = (0..cfg.n_ues)
            .map(|i| Device {
                key: KeyPair::derive(cfg.seed, &ActorId::Ue(i).to_string()),
                seq: 0,
            })
            .collect();
        for (i, d) in devices.iter().enumerate() {
            membership.insert(ActorId::Ue(i as u32), d.key.public());
        }
        let peers: Vec<Peer> = (0..cfg.peer_pool).map(|i| Peer::new(i, cfg.seed)).collect();
        for p in &peers {
            membership.insert(p.id, p.key.public());
        }
        let contract_key = KeyPair::derive(cfg.seed, &ActorId::Contract.to_string());
        membership.insert(ActorId::Contract, contract_key.public());
        let ues = (0..cfg.n_ues)
            .map(|i| {
                let mut u = UeContext::new(i, cfg.ue.ce_level);
                u.cp_ciot_enabled = cfg.ue.cp_ciot;
                u.cp_ciot_max_bytes = cfg.ue.cp_ciot_max_bytes;
                u.held_dl_capacity = cfg.ue.dl_hold_capacity;
                u
            })
            .collect();
        World {
            cell: Cell::new(cfg.cell.clone()),
            ues,
            devices,
            peers,
            membership,
            policy: cfg.policy(),
            orderer: Orderer::new(cfg.orderer_config()),
            ledger: Ledger::new(SmartContract::new(cfg.alarm_threshold_ppm, cfg.alarm_window)),
            confirmer: Confirmer::new(cfg.confirmation),
            contract_key,
            traffic: TrafficLedger::default(),
            records: Vec::new(),
            index: HashMap::new(),
            status: Vec::new(),
            client_tx: HashMap::new(),
            transit: HashMap::new(),
            next_msg: 0,
            next_nonce: 0,
            generated: 0,
            ra_failures: 0,
            confirmations: 0,
            alarms: Vec::new(),
            alarm_index: HashMap::new(),
            cfg,
        }
    }

    /// Runs the scenario to completion and checks the run invariants.
    pub fn run(cfg: ScenarioConfig) -> Result<RunOutput, RunError> {
        let mut eng: Engine<Ev> = Engine::new(cfg.seed, STREAMS);
        let mut world = World::new(cfg);
        let interval = world.cfg.report_interval;
        let mut last_phase = SimTime::ZERO;
        for i in 0..world.cfg.n_ues {
            let phase = SimTime::from_us(eng.rng("phase")?.gen_range(0..interval.as_us()));
            last_phase = last_phase.max(phase);
            eng.schedule(phase, ActorId::Ue(i), Ev::PowerOn)?;
            eng.schedule(phase + interval, ActorId::Ue(i), Ev::Generate)?;
        }
        let rounds = world.cfg.n_transactions.div_ceil(u64::from(world.cfg.n_ues));
        let horizon = last_phase + interval * (rounds + 1) + world.cfg.drain;
        eng.run_until(horizon, |eng, ev| world.handle(eng, ev.target, ev.payload))?;
        let end_time = eng.now();
        let trace = eng.into_trace();
        world.finish(trace, end_time)
    }

    fn msg_id(&mut self) -> MessageId {
        self.next_msg += 1;
        MessageId(self.next_msg)
    }

    fn note(&self, eng: &mut Engine<Ev>, msg: &RadioMessage) {
        let name = match msg.direction {
            Direction::Ul => "ul_bytes",
            Direction::Dl => "dl_bytes",
        };
        eng.record(
            msg.ue(),
            name,
            u64::from(msg.total_bytes()),
            format!("class={} msg={}", msg.class, msg.id.0),
        );
    }

    fn record_mut(&mut self, tx: &Digest) -> Option<&mut LatencyRecord> {
        self.index.get(tx).map(|&i| &mut self.records[i])
    }

    fn set_status(&mut self, tx: &Digest, s: Status) {
        if let Some(&i) = self.index.get(tx) {
            if self.status[i] == Status::Pending {
                self.status[i] = s;
            }
        }
    }

    fn handle(&mut self, eng: &mut Engine<Ev>, target: ActorId, ev: Ev) -> Result<(), RunError> {
        let now = eng.now();
        match ev {
            Ev::PowerOn => {
                let at = acquire_system_info(&self.cell.cfg, now);
                eng.schedule(at, target, Ev::SyncComplete)?;
            }
            Ev::SyncComplete => {
                self.ues[ue_index(target)].synced = true;
                self.kick(eng, target)?;
            }
            Ev::Generate => self.generate(eng, target)?,
            Ev::RaResolve { occasion } => self.resolve_access(eng, occasion)?,
            Ev::AccessComplete => self.access_complete(eng, target)?,
            Ev::SetupComplete => self.connected(eng, target)?,
            Ev::UlDelivered { msg } => self.ul_delivered(eng, msg)?,
            Ev::DlAtEnb { msg } => self.dl_at_enb(eng, msg)?,
            Ev::DlDelivered { msg } => self.dl_delivered(eng, msg)?,
            Ev::PeerProposal { tx } => {
                let peer = match target {
                    ActorId::Peer(i) => &self.peers[i as usize],
                    other => return Err(RunError::Invariant(format!("proposal sent to {other}"))),
                };
                let Some(ctx) = self.client_tx.get(&tx) else {
                    return Ok(());
                };
                let proposal = &ctx.proposal;
                let outcome = endorse(peer, proposal, &self.membership, &self.ledger);
                eng.schedule_in(self.cfg.profile.endorse_service, target, Ev::PeerRespond { tx, outcome });
            }
            Ev::PeerRespond { tx, outcome } => self.peer_respond(eng, target, tx, outcome)?,
            Ev::OrdererArrival { etx } => self.orderer_arrival(eng, *etx)?,
            Ev::BatchTimeout { epoch } => {
                if self.orderer.epoch() == epoch {
                    self.cut(eng)?;
                }
            }
            Ev::BlockReady { block } => {
                eng.schedule_in(self.cfg.profile.backhaul_delay, ActorId::Peer(0), Ev::Commit { block });
            }
            Ev::Commit { block } => self.commit(eng, *block)?,
            Ev::ServerArrival { tx } => {
                self.set_status(&tx, Status::Committed);
                if let Some(r) = self.record_mut(&tx) {
                    r.t_committed = Some(now);
                }
                let ue = self.records[self.index[&tx]].ue;
                let id = self.msg_id();
                let msg = RadioMessage::dl(
                    id,
                    ue,
                    MsgClass::BaselineAck,
                    self.cfg.confirmation.dl_payload_bytes,
                    self.cfg.profile.header_bytes_dl,
                    Some(tx),
                );
                self.transit.insert(id, (msg, Content::BaselineAck { tx }));
                eng.schedule_in(self.cfg.profile.backhaul_delay, ActorId::Enb, Ev::DlAtEnb { msg: id });
            }
            Ev::InactivityCheck { since } => {
                let ue = &mut self.ues[ue_index(target)];
                if ue.is_connected() && ue.last_activity == since && ue.is_quiescent() {
                    ue.release();
                    eng.record(target, "rrc_release", 0, String::new());
                }
            }
        }
        Ok(())
    }

    fn touch(&mut self, eng: &mut Engine<Ev>, ue: ActorId) {
        let now = eng.now();
        let u = &mut self.ues[ue_index(ue)];
        u.last_activity = now;
        eng.schedule_in(self.cfg.profile.inactivity_timer, ue, Ev::InactivityCheck { since: now });
    }

    fn generate(&mut self, eng: &mut Engine<Ev>, ue: ActorId) -> Result<(), RunError> {
        if self.generated >= self.cfg.n_transactions {
            return Ok(());
        }
        self.generated += 1;
        let now = eng.now();
        let i = ue_index(ue);
        let seq = self.devices[i].seq;
        self.devices[i].seq += 1;
        let ppm = self.cfg.sensor.reading(seq, now, eng.rng("sensor-noise")?);
        let payload = SensorModel::payload(i as u32, seq, ppm, self.cfg.payload_bytes);
        self.next_nonce += 1;
        let proposal = TransactionProposal::new_signed(ue, payload, now, self.next_nonce, &self.devices[i].key);
        let tx = proposal.tx_id;
        self.index.insert(tx, self.records.len());
        self.records.push(LatencyRecord::new(tx, ue, now));
        self.status.push(Status::Pending);
        let id = self.msg_id();
        let h = self.cfg.profile.header_bytes_ul;
        let (msg, content) = match self.cfg.mode {
            Mode::Baseline => (
                RadioMessage::ul(id, ue, MsgClass::BaselineData, self.cfg.payload_bytes, h, Some(tx)),
                Content::BaselineData { tx },
            ),
            Mode::Dlt => {
                let bytes = proposal.wire_len();
                let peers = select_peers(&self.policy, eng.rng("peer-selection")?);
                self.client_tx.insert(
                    tx,
                    ClientTx {
                        proposal,
                        peers,
                        responses: Vec::new(),
                    },
                );
                (
                    RadioMessage::ul(id, ue, MsgClass::Proposal, bytes, h, Some(tx)),
                    Content::Proposal { tx },
                )
            }
        };
        self.enqueue_ul(eng, msg, content)?;
        if self.generated < self.cfg.n_transactions {
            eng.schedule_in(self.cfg.report_interval, ue, Ev::Generate);
        }
        Ok(())
    }

    fn enqueue_ul(&mut self, eng: &mut Engine<Ev>, msg: RadioMessage, content: Content) -> Result<(), RunError> {
        let ue = msg.ue();
        self.transit.insert(msg.id, (msg.clone(), content));
        self.ues[ue_index(ue)].pending_ul.push_back(msg);
        self.kick(eng, ue)
    }

    /// Sends queued UL data if connected, otherwise starts an access.
    fn kick(&mut self, eng: &mut Engine<Ev>, ue: ActorId) -> Result<(), RunError> {
        let now = eng.now();
        let i = ue_index(ue);
        if !self.ues[i].synced || self.ues[i].pending_ul.is_empty() {
            return Ok(());
        }
        if self.ues[i].is_connected() {
            while let Some(msg) = self.ues[i].pending_ul.pop_front() {
                let done = self.cell.transmit_ul(&self.ues[i], &msg, now, &mut self.traffic)?;
                self.note(eng, &msg);
                self.ues[i].in_flight += 1;
                eng.schedule(done, ActorId::Enb, Ev::UlDelivered { msg: msg.id })?;
            }
            self.touch(eng, ue);
        } else if !self.ues[i].accessing {
            self.ues[i].accessing = true;
            self.attempt_access(eng, ue, now)?;
        }
        Ok(())
    }

    fn attempt_access(&mut self, eng: &mut Engine<Ev>, ue: ActorId, ready: SimTime) -> Result<(), RunError> {
        self.ues[ue_index(ue)].ra_attempts += 1;
        let preamble = self.cell.nprach.draw_preamble(eng.rng("preamble")?);
        let (occasion, first) = self.cell.nprach.register(ue, ready, preamble);
        if first {
            eng.schedule(occasion, ActorId::Enb, Ev::RaResolve { occasion })?;
        }
        Ok(())
    }

    fn resolve_access(&mut self, eng: &mut Engine<Ev>, occasion: SimTime) -> Result<(), RunError> {
        let rar = self.cell.cfg.rar_window;
        for o in self.cell.nprach.resolve(occasion) {
            let i = ue_index(o.ue);
            eng.record(o.ue, "ra_attempt", u64::from(o.success), format!("preamble={}", o.preamble));
            if o.success {
                let b = self.cell.cfg.ra_signaling_bytes;
                let id3 = self.msg_id();
                let msg3 = RadioMessage::ul(id3, o.ue, MsgClass::Signaling, b, 0, None);
                let t3 = self.cell.signaling(&self.ues[i], &msg3, occasion + rar, &mut self.traffic)?;
                self.note(eng, &msg3);
                let id4 = self.msg_id();
                let msg4 = RadioMessage::dl(id4, o.ue, MsgClass::Signaling, b, 0, None);
                let t4 = self.cell.signaling(&self.ues[i], &msg4, t3, &mut self.traffic)?;
                self.note(eng, &msg4);
                eng.schedule(t4, o.ue, Ev::AccessComplete)?;
            } else if self.ues[i].ra_attempts >= self.cell.cfg.max_ra_attempts {
                self.ra_failures += 1;
                let u = &mut self.ues[i];
                u.accessing = false;
                u.ra_attempts = 0;
                let dropped: Vec<RadioMessage> = u.pending_ul.drain(..).collect();
                for m in dropped {
                    if let Some((_, c)) = self.transit.remove(&m.id) {
                        self.drop_content(&c);
                    }
                }
                eng.record(o.ue, "ra_failure", 0, String::new());
            } else {
                let max = self.cell.cfg.backoff_max.as_us();
                let backoff = SimTime::from_us(eng.rng("backoff")?.gen_range(0..=max));
                self.attempt_access(eng, o.ue, occasion + rar + backoff)?;
            }
        }
        Ok(())
    }

    fn drop_content(&mut self, c: &Content) {
        let tx = match c {
            Content::Proposal { tx } | Content::BaselineData { tx } => *tx,
            Content::Submit { etx } => etx.tx_id(),
            _ => return,
        };
        self.set_status(&tx, Status::Dropped);
        self.client_tx.remove(&tx);
    }

    fn access_complete(&mut self, eng: &mut Engine<Ev>, ue: ActorId) -> Result<(), RunError> {
        let now = eng.now();
        let i = ue_index(ue);
        let fits = self.ues[i]
            .pending_ul
            .front()
            .is_some_and(|m| self.ues[i].cp_ciot_enabled && m.total_bytes() <= self.ues[i].cp_ciot_max_bytes);
        if fits {
            let msg = self.ues[i].pending_ul.pop_front().expect("checked non-empty");
            let done = self.cell.piggyback_ul(&mut self.ues[i], &msg, now, &mut self.traffic)?;
            self.note(eng, &msg);
            self.ues[i].in_flight += 1;
            eng.schedule(done, ActorId::Enb, Ev::UlDelivered { msg: msg.id })?;
        }
        eng.schedule_in(self.cfg.profile.connected_setup, ue, Ev::SetupComplete);
        Ok(())
    }

    fn connected(&mut self, eng: &mut Engine<Ev>, ue: ActorId) -> Result<(), RunError> {
        let now = eng.now();
        let i = ue_index(ue);
        self.ues[i].connect(now);
        for (msg, at) in self.cell.flush_held_dl(&mut self.ues[i], now, &mut self.traffic)? {
            self.note(eng, &msg);
            self.ues[i].in_flight += 1;
            eng.schedule(at, ue, Ev::DlDelivered { msg: msg.id })?;
        }
        self.touch(eng, ue);
        self.kick(eng, ue)
    }

    fn ul_delivered(&mut self, eng: &mut Engine<Ev>, id: MessageId) -> Result<(), RunError> {
        let now = eng.now();
        let (msg, content) = self
            .transit
            .remove(&id)
            .ok_or_else(|| RunError::Invariant(format!("UL message {} delivered twice", id.0)))?;
        let ue = msg.ue();
        self.ues[ue_index(ue)].in_flight -= 1;
        self.touch(eng, ue);
        let backhaul = self.cfg.profile.backhaul_delay;
        match content {
            Content::Proposal { tx } => {
                if let Some(r) = self.record_mut(&tx) {
                    r.t_ul_delivered = Some(now);
                }
                let peers = self.client_tx.get(&tx).map(|c| c.peers.clone()).unwrap_or_default();
                for p in peers {
                    eng.schedule_in(backhaul, p, Ev::PeerProposal { tx });
                }
            }
            Content::Submit { etx } => {
                eng.schedule_in(backhaul, ActorId::Orderer, Ev::OrdererArrival { etx });
            }
            Content::BaselineData { tx } => {
                if let Some(r) = self.record_mut(&tx) {
                    r.t_ul_delivered = Some(now);
                }
                eng.schedule_in(backhaul, ActorId::Server, Ev::ServerArrival { tx });
            }
            other => return Err(RunError::Invariant(format!("unexpected UL content {other:?}"))),
        }
        Ok(())
    }

    fn peer_respond(
        &mut self,
        eng: &mut Engine<Ev>,
        peer: ActorId,
        tx: Digest,
        outcome: Result<Endorsement, Rejection>,
    ) -> Result<(), RunError> {
        let Some(ctx) = self.client_tx.get(&tx) else {
            return Ok(());
        };
        let ue = ctx.proposal.client;
        let p = &self.cfg.profile;
        let bytes = match &outcome {
            Ok(_) => response_payload_bytes(p.endorse_response, &ctx.proposal) + p.response_extra_bytes,
            Err(_) => DIGEST_LEN as u32 + p.response_extra_bytes,
        };
        let header = p.header_bytes_dl;
        let id = self.msg_id();
        let msg = RadioMessage::dl(id, ue, MsgClass::EndorsementResponse, bytes, header, Some(tx));
        eng.record(peer, "endorse", u64::from(outcome.is_ok()), String::new());
        self.transit.insert(
            id,
            (
                msg,
                Content::Response {
                    tx,
                    endorsement: outcome.ok(),
                },
            ),
        );
        eng.schedule_in(self.cfg.profile.backhaul_delay, ActorId::Enb, Ev::DlAtEnb { msg: id });
        Ok(())
    }

    fn dl_at_enb(&mut self, eng: &mut Engine<Ev>, id: MessageId) -> Result<(), RunError> {
        let now = eng.now();
        let msg = self.transit[&id].0.clone();
        let ue = msg.ue();
        let i = ue_index(ue);
        match self.cell.deliver_dl(&mut self.ues[i], &msg, now, &mut self.traffic)? {
            DlOutcome::Scheduled { delivered, .. } => {
                self.note(eng, &msg);
                self.ues[i].in_flight += 1;
                eng.schedule(delivered, ue, Ev::DlDelivered { msg: id })?;
                self.touch(eng, ue);
            }
            DlOutcome::Held => {}
            DlOutcome::Overflow => {
                if let Some((_, Content::Response { tx, .. })) = self.transit.remove(&id) {
                    self.set_status(&tx, Status::Dropped);
                    self.client_tx.remove(&tx);
                }
                eng.record(ue, "dl_overflow", 1, format!("msg={}", id.0));
            }
        }
        Ok(())
    }

    fn dl_delivered(&mut self, eng: &mut Engine<Ev>, id: MessageId) -> Result<(), RunError> {
        let now = eng.now();
        let (msg, content) = self
            .transit
            .remove(&id)
            .ok_or_else(|| RunError::Invariant(format!("DL message {} delivered twice", id.0)))?;
        let ue = msg.ue();
        self.ues[ue_index(ue)].in_flight -= 1;
        self.touch(eng, ue);
        match content {
            Content::Response { tx, endorsement } => {
                let Some(ctx) = self.client_tx.get_mut(&tx) else {
                    return Ok(());
                };
                ctx.responses.push(endorsement);
                if ctx.responses.len() < ctx.peers.len() {
                    return Ok(());
                }
                let ctx = self.client_tx.remove(&tx).expect("present");
                if let Some(r) = self.record_mut(&tx) {
                    r.t_endorsed = Some(now);
                }
                let etx = EndorsedTransaction {
                    proposal: ctx.proposal,
                    endorsements: ctx.responses.into_iter().flatten().collect(),
                };
                let id = self.msg_id();
                let out = RadioMessage::ul(
                    id,
                    ue,
                    MsgClass::OrdererSubmit,
                    etx.wire_len(),
                    self.cfg.profile.header_bytes_ul,
                    Some(tx),
                );
                self.enqueue_ul(eng, out, Content::Submit { etx: Box::new(etx) })?;
            }
            Content::Confirmation { covers } => {
                for tx in covers {
                    if let Some(r) = self.record_mut(&tx) {
                        r.t_confirmed.get_or_insert(now);
                    }
                }
            }
            Content::BaselineAck { tx } => {
                if let Some(r) = self.record_mut(&tx) {
                    r.t_confirmed.get_or_insert(now);
                }
            }
            other => return Err(RunError::Invariant(format!("unexpected DL content {other:?}"))),
        }
        Ok(())
    }

    fn orderer_arrival(&mut self, eng: &mut Engine<Ev>, etx: EndorsedTransaction) -> Result<(), RunError> {
        let now = eng.now();
        let tx = etx.tx_id();
        match self.orderer.submit(etx, now, &self.policy, &self.membership) {
            Err(r) => {
                eng.record(ActorId::Orderer, "rejected", 1, format!("tx={} {r}", &tx.to_hex()[..12]));
                self.set_status(&tx, Status::Rejected);
            }
            Ok(SubmitOutcome::BatchFull) => self.cut(eng)?,
            Ok(SubmitOutcome::BatchOpened { epoch, deadline }) => {
                eng.schedule(deadline, ActorId::Orderer, Ev::BatchTimeout { epoch })?;
            }
            Ok(SubmitOutcome::Queued) => {}
        }
        Ok(())
    }

    fn cut(&mut self, eng: &mut Engine<Ev>) -> Result<(), RunError> {
        let now = eng.now();
        let Some(CutBatch { block, ready_at, .. }) = self.orderer.cut_block(now) else {
            return Ok(());
        };
        for etx in &block.txs {
            if let Some(r) = self.record_mut(&etx.tx_id()) {
                r.t_ordered = Some(now);
            }
        }
        eng.schedule(ready_at, ActorId::Orderer, Ev::BlockReady { block: Box::new(block) })?;
        if let Some(oldest) = self.orderer.oldest_arrival() {
            let deadline = (oldest + self.orderer.cfg.batch_timeout).max(now);
            eng.schedule(deadline, ActorId::Orderer, Ev::BatchTimeout { epoch: self.orderer.epoch() })?;
        }
        Ok(())
    }

    fn commit(&mut self, eng: &mut Engine<Ev>, block: Block) -> Result<(), RunError> {
        let now = eng.now();
        let height = block.height;
        let ids: Vec<Digest> = block.txs.iter().map(EndorsedTransaction::tx_id).collect();
        let result = self.ledger.validate_and_commit(block, &self.policy, &self.membership)?;
        for (tx, v) in ids.iter().zip(&result.validity) {
            match v {
                TxValidity::Valid => {
                    self.set_status(tx, Status::Committed);
                    if let Some(r) = self.record_mut(tx) {
                        r.t_committed = Some(now);
                    }
                    if let Some(&a) = self.alarm_index.get(tx) {
                        self.alarms[a].committed_height = Some(height);
                    }
                }
                TxValidity::Invalid(_) => self.set_status(tx, Status::Rejected),
            }
        }
        eng.record(ActorId::Peer(0), "block_committed", height, format!("txs={}", ids.len()));
        let backhaul = self.cfg.profile.backhaul_delay;
        for alarm in &result.alarms {
            self.raise_alarm(eng, alarm.sensor, alarm.mean_ppm, alarm.reading_index, height)?;
        }
        for c in self.confirmer.emit_confirmations(&result.committed) {
            self.confirmations += 1;
            let id = self.msg_id();
            let last = c.covers.last().copied();
            let msg = RadioMessage::dl(
                id,
                c.client,
                MsgClass::Confirmation,
                c.payload_bytes,
                self.cfg.profile.header_bytes_dl,
                last,
            );
            self.transit.insert(id, (msg, Content::Confirmation { covers: c.covers }));
            eng.schedule_in(backhaul, ActorId::Enb, Ev::DlAtEnb { msg: id });
        }
        Ok(())
    }

    /// The contract's alarm becomes a ledger transaction of its own, endorsed
    /// inside the network and submitted straight to the orderer.
    fn raise_alarm(
        &mut self,
        eng: &mut Engine<Ev>,
        sensor: ActorId,
        mean_ppm: f64,
        reading_index: u64,
        height: u64,
    ) -> Result<(), RunError> {
        let now = eng.now();
        self.next_nonce += 1;
        let payload = TxPayload::Alarm {
            sensor: ue_index(sensor) as u32,
            mean_mppm: (mean_ppm * 1000.0).round() as u64,
        }
        .encode(READING_RECORD_LEN.max(self.cfg.payload_bytes as usize));
        let proposal =
            TransactionProposal::new_signed(ActorId::Contract, payload, now, self.next_nonce, &self.contract_key);
        let peers = select_peers(&self.policy, eng.rng("peer-selection")?);
        let mut endorsements = Vec::new();
        for p in peers {
            let peer = &self.peers[match p {
                ActorId::Peer(i) => i as usize,
                _ => unreachable!("pool holds peers"),
            }];
            if let Ok(e) = endorse(peer, &proposal, &self.membership, &self.ledger) {
                endorsements.push(e);
            }
        }
        let etx = EndorsedTransaction {
            proposal,
            endorsements,
        };
        self.alarm_index.insert(etx.tx_id(), self.alarms.len());
        self.alarms.push(AlarmLog {
            raised_at: now,
            sensor,
            mean_ppm,
            reading_index,
            trigger_height: height,
            alarm_tx: etx.tx_id(),
            committed_height: None,
        });
        eng.record(ActorId::Contract, "alarm", reading_index, format!("sensor={sensor} mean={mean_ppm:.3}"));
        let delay = self.cfg.profile.endorse_service + self.cfg.profile.backhaul_delay;
        eng.schedule_in(delay, ActorId::Orderer, Ev::OrdererArrival { etx: Box::new(etx) });
        Ok(())
    }

    fn finish(mut self, trace: RunTrace, end_time: SimTime) -> Result<RunOutput, RunError> {
        // Work still in flight at the horizon never completed.
        for s in &mut self.status {
            if *s == Status::Pending {
                *s = Status::Dropped;
            }
        }
        let count = |s: Status| self.status.iter().filter(|&&x| x == s).count() as u64;
        let stats = e2e_stats(&self.records);
        let dlt = self.cfg.mode == Mode::Dlt;
        let summary = RunSummary {
            scenario: self.cfg.name.clone(),
            seed: self.cfg.seed,
            payload_bytes: self.cfg.payload_bytes,
            endorsement_e: if dlt { self.cfg.endorsement_e } else { 0 },
            block_size_b: if dlt { self.cfg.block_size_b } else { 0 },
            mode: self.cfg.mode,
            ratio_mean: self.traffic.ul_dl_ratio(),
            ratio_of_totals: self.traffic.ul_dl_ratio_of_totals(),
            e2e_mean_s: stats.as_ref().map(|s| s.mean_s),
            e2e_p95_s: stats.as_ref().map(|s| s.p95.as_secs_f64()),
            generated: self.generated,
            committed: count(Status::Committed),
            rejected: count(Status::Rejected),
            dropped: count(Status::Dropped),
            ra_failures: self.ra_failures,
            blocks: self.ledger.height(),
            alarms: self.alarms.len() as u64,
            confirmations: self.confirmations,
            dl_overflow: self.ues.iter().map(|u| u.dl_overflow).sum(),
            ul_data_bytes: self.traffic.data_bytes(Direction::Ul),
            dl_data_bytes: self.traffic.data_bytes(Direction::Dl),
            signaling_bytes: self.traffic.signaling_bytes(),
        };
        let per_tx = self
            .records
            .iter()
            .map(|r| {
                let b = self.traffic.tx_bytes(&r.tx_id);
                PerTxRow {
                    tx_id: r.tx_id,
                    ue: r.ue,
                    t_gen: r.t_generated,
                    t_commit: r.t_committed,
                    t_confirm: r.t_confirmed,
                    ul_bytes: b.ul_bytes,
                    dl_bytes: b.dl_bytes,
                }
            })
            .collect();
        let out = RunOutput {
            summary,
            per_tx,
            stats,
            blocks: self.ledger.blocks().to_vec(),
            validity: (1..=self.ledger.height())
                .map(|h| self.ledger.validity(h).unwrap_or_default().to_vec())
                .collect(),
            alarms: self.alarms,
            records: self.records,
            traffic: self.traffic,
            trace,
            end_time,
        };
        check_invariants(&out, &self.ledger, self.orderer.cfg.block_size_b)?;
        Ok(out)
    }
}

fn check_invariants(out: &RunOutput, ledger: &Ledger, block_size: u32) -> Result<(), RunError> {
    let fail = |m: String| Err(RunError::Invariant(m));
    ledger.verify_chain()?;
    let traced = out.trace.metric_sum("ul_bytes") + out.trace.metric_sum("dl_bytes");
    if traced != out.traffic.total_bytes() {
        return fail(format!(
            "byte conservation: ledger counts {} bytes, trace {}",
            out.traffic.total_bytes(),
            traced
        ));
    }
    if !out.summary.accounting_balanced() {
        return fail(format!(
            "accounting: committed {} + rejected {} + dropped {} != generated {}",
            out.summary.committed, out.summary.rejected, out.summary.dropped, out.summary.generated
        ));
    }
    if let Some(r) = out.records.iter().find(|r| !r.stages_ordered()) {
        return fail(format!("stage timestamps out of order for tx {}", r.tx_id.to_hex()));
    }
    if let Some(b) = out.blocks.iter().find(|b| b.txs.len() > block_size as usize) {
        return fail(format!("block {} holds {} > {block_size} txs", b.height, b.txs.len()));
    }
    Ok(())
}
