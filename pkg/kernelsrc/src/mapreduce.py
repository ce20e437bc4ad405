"""
In-process MapReduce engine.

One master coordinates worker threads in simulated time. Every tick (one
heartbeat interval) the master sends each live worker one envelope over
its inbox queue: a ping, plus a task assignment when the worker is free.
Each worker answers with exactly one reply on the shared outbox; a crashed
or paused worker's reply is "no response". Missing `max_missed_pings`
consecutive pings marks a worker failed, and its work is handed to other
workers. Map outputs stay in the worker that produced them and are lost
with it. Reduce outputs are committed to the cluster's output store.
"""

from __future__ import annotations

import logging
import queue
import random
import threading
import time
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, Iterator, NamedTuple, Optional, Sequence

import pandas as pd

from kernelsrc.defaults import CHECKPOINT_INTERVAL, HEARTBEAT_INTERVAL, MAX_MISSED_PINGS
from kernelsrc.src.checkpoint import decode_checkpoint, encode_checkpoint
from kernelsrc.src.errors import JobError, MasterFailure, NoWorkersAvailableError

logger = logging.getLogger("mapreduce")

MAX_TICKS = 100_000


class KeyValue(NamedTuple):
    key: bytes
    value: bytes


MapFn = Callable[[Any], Iterable[tuple[bytes, bytes]]]
ReduceFn = Callable[[bytes, list[bytes]], Iterable[tuple[bytes, bytes]]]
PartitionFn = Callable[[bytes, int], int]


# ------------------------------------------------------------
# Partitioning
# ------------------------------------------------------------
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def hash_partition(key: bytes, num_reduce_tasks: int) -> int:
    return fnv1a_64(key) % num_reduce_tasks


# ------------------------------------------------------------
# Job description and bookkeeping
# ------------------------------------------------------------
@dataclass
class JobConfig:
    num_workers: int = 1
    num_map_tasks: Optional[int] = None          # None: one map task per input split
    num_reduce_tasks: int = 1
    heartbeat_interval: float = HEARTBEAT_INTERVAL
    max_missed_pings: int = MAX_MISSED_PINGS
    checkpoint_interval: int = CHECKPOINT_INTERVAL  # task completions, 0 = never
    fault_plan: list[tuple[int, int]] = field(default_factory=list)      # (worker, fail after k completions)
    pause_plan: list[tuple[int, int, int]] = field(default_factory=list)  # (worker, first tick, ticks)
    kill_master_at_checkpoint: Optional[int] = None
    seed: int = 0
    partition_fn: Optional[PartitionFn] = None

    def __post_init__(self):
        if self.num_workers < 1:
            raise ValueError(f"num_workers must be >= 1, got {self.num_workers}")
        if self.num_reduce_tasks < 1:
            raise ValueError(f"num_reduce_tasks must be >= 1, got {self.num_reduce_tasks}")
        if self.num_map_tasks is not None and self.num_map_tasks < 1:
            raise ValueError(f"num_map_tasks must be >= 1, got {self.num_map_tasks}")
        if self.max_missed_pings < 1:
            raise ValueError(f"max_missed_pings must be >= 1, got {self.max_missed_pings}")

    def partition(self, key: bytes) -> int:
        fn = self.partition_fn or hash_partition
        return fn(key, self.num_reduce_tasks)


def parse_fault_plan(text: str) -> list[tuple[int, int]]:
    """'worker:after_k_tasks[,...]' -> [(worker, k), ...]"""
    plan = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        worker, _, after = item.partition(":")
        if not after:
            raise ValueError(f"bad fault plan entry {item!r}, expected worker:after_k_tasks")
        plan.append((int(worker), int(after)))
    return plan


class TaskKind(str, Enum):
    MAP = "map"
    REDUCE = "reduce"


class TaskState(str, Enum):
    IDLE = "idle"
    IN_PROGRESS = "in-progress"
    COMPLETED = "completed"


@dataclass
class TaskRecord:
    kind: TaskKind
    index: int
    state: TaskState = TaskState.IDLE
    attempts: int = 0
    history: list[int] = field(default_factory=list)
    affinity: Optional[int] = None
    contributing_attempt: Optional[int] = None
    partition_sizes: list[int] = field(default_factory=list)
    assigned_at: list[int] = field(default_factory=list)    # tick of each attempt
    completed_at: Optional[int] = None

    @property
    def task_id(self) -> str:
        return f"{self.kind.value}-{self.index}"

    @property
    def worker(self) -> Optional[int]:
        return self.history[-1] if self.history else None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value, "index": self.index, "state": self.state.value,
            "attempts": self.attempts, "history": self.history, "affinity": self.affinity,
            "contributing_attempt": self.contributing_attempt, "partition_sizes": self.partition_sizes,
            "assigned_at": self.assigned_at, "completed_at": self.completed_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TaskRecord":
        return cls(
            kind=TaskKind(d["kind"]), index=d["index"], state=TaskState(d["state"]),
            attempts=d["attempts"], history=list(d["history"]), affinity=d["affinity"],
            contributing_attempt=d["contributing_attempt"], partition_sizes=list(d["partition_sizes"]),
            assigned_at=list(d["assigned_at"]), completed_at=d["completed_at"],
        )


@dataclass
class WorkerEvent:
    tick: int
    time: float
    worker: int
    status: str      # "missed", "resumed" or "failed"


@dataclass
class JobReport:
    tasks: list[TaskRecord] = field(default_factory=list)
    total_reassignments: int = 0
    checkpoints_written: int = 0
    master_recoveries: int = 0
    wall_time: float = 0.0
    ticks: int = 0
    events: list[WorkerEvent] = field(default_factory=list)
    executions: dict[str, int] = field(default_factory=dict)   # task runs across all attempts

    @property
    def failure_events(self) -> list[WorkerEvent]:
        return [e for e in self.events if e.status == "failed"]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {"task": t.task_id, "kind": t.kind.value, "state": t.state.value, "attempts": t.attempts,
             "workers": " ".join(str(w) for w in t.history), "contributing_attempt": t.contributing_attempt}
            for t in self.tasks
        ], columns=["task", "kind", "state", "attempts", "workers", "contributing_attempt"])

    def attempts_frame(self) -> pd.DataFrame:
        """One row per task attempt with its worker and tick span."""
        rows = []
        for t in self.tasks:
            for i, (worker, start) in enumerate(zip(t.history, t.assigned_at)):
                if i + 1 < len(t.assigned_at):
                    end = t.assigned_at[i + 1]
                else:
                    end = t.completed_at if t.completed_at is not None else start
                rows.append({"task": t.task_id, "kind": t.kind.value, "attempt": i + 1, "worker": worker,
                             "start_tick": start, "end_tick": end + 1,
                             "contributing": t.contributing_attempt == i + 1})
        return pd.DataFrame(rows, columns=["task", "kind", "attempt", "worker", "start_tick", "end_tick",
                                           "contributing"])

    def to_csv(self, path) -> None:
        self.to_frame().to_csv(path, index=False)

    def to_text(self) -> str:
        maps = sum(1 for t in self.tasks if t.kind is TaskKind.MAP)
        lines = [
            f"tasks: {len(self.tasks)} ({maps} map, {len(self.tasks) - maps} reduce)",
            f"reassignments: {self.total_reassignments}",
            f"worker failures: {len(self.failure_events)}",
            f"checkpoints written: {self.checkpoints_written}",
            f"master recoveries: {self.master_recoveries}",
            f"simulated ticks: {self.ticks}",
            f"wall time: {self.wall_time:.4f} s",
        ]
        return "\n".join(lines)


# ------------------------------------------------------------
# Heartbeats
# ------------------------------------------------------------
class HeartbeatMonitor:
    """Counts consecutive missed pings per worker and reports status changes."""

    def __init__(self, cfg: JobConfig):
        self.cfg = cfg
        self.missed: dict[int, int] = defaultdict(int)
        self.failed: set[int] = set()
        self.events: list[WorkerEvent] = []

    def observe(self, tick: int, worker: int, responded: bool) -> Optional[WorkerEvent]:
        if worker in self.failed:
            return None
        event = None
        if responded:
            if self.missed[worker]:
                event = WorkerEvent(tick, tick * self.cfg.heartbeat_interval, worker, "resumed")
            self.missed[worker] = 0
        else:
            self.missed[worker] += 1
            status = "missed"
            if self.missed[worker] >= self.cfg.max_missed_pings:
                self.failed.add(worker)
                status = "failed"
            event = WorkerEvent(tick, tick * self.cfg.heartbeat_interval, worker, status)
        if event is not None:
            self.events.append(event)
        return event

    def __iter__(self) -> Iterator[WorkerEvent]:
        return iter(self.events)

    def state(self) -> dict:
        return {"missed": {str(w): c for w, c in self.missed.items()}, "failed": sorted(self.failed)}

    def restore(self, state: dict) -> None:
        self.missed = defaultdict(int, {int(w): c for w, c in state["missed"].items()})
        self.failed = set(state["failed"])


def heartbeat_monitor(cfg: JobConfig) -> HeartbeatMonitor:
    return HeartbeatMonitor(cfg)


# ------------------------------------------------------------
# Scheduling
# ------------------------------------------------------------
def schedule_next(idle: Sequence[TaskRecord], free: Sequence[int]) -> tuple[TaskRecord, int]:
    """
    Prefer a task whose affinity worker is free (lowest task id first);
    otherwise pair the lowest task id with the lowest free worker.
    """
    free_set = set(free)
    ordered = sorted(idle, key=lambda t: (t.kind is TaskKind.REDUCE, t.index))
    for task in ordered:
        if task.affinity is not None and task.affinity in free_set:
            return task, task.affinity
    return ordered[0], min(free)


# ------------------------------------------------------------
# Worker side
# ------------------------------------------------------------
@dataclass
class TaskSpec:
    kind: TaskKind
    index: int
    splits: list = field(default_factory=list)
    sources: dict[int, int] = field(default_factory=dict)   # map index -> worker holding its output


@dataclass
class Envelope:
    tick: int
    task: Optional[TaskSpec] = None


@dataclass
class Reply:
    worker: int
    tick: int
    responded: bool
    task: Optional[TaskSpec] = None
    partition_sizes: list[int] = field(default_factory=list)
    output: list[KeyValue] = field(default_factory=list)
    lost_maps: list[int] = field(default_factory=list)
    error: Optional[BaseException] = None


class Worker(threading.Thread):
    def __init__(self, worker_id: int, cluster: "Cluster"):
        super().__init__(name=f"mr-worker-{worker_id}", daemon=True)
        self.worker_id = worker_id
        self.cluster = cluster
        self.inbox: queue.Queue = queue.Queue()
        self.store: dict[int, list[list[KeyValue]]] = {}
        self.completed = 0
        self.crashed_from: Optional[int] = None
        self.pending: Optional[TaskSpec] = None
        self.fail_after = min((k for w, k in cluster.cfg.fault_plan if w == worker_id), default=None)
        self.pauses = [(start, start + span) for w, start, span in cluster.cfg.pause_plan if w == worker_id]
        if self.fail_after == 0:
            self.crashed_from = 0

    def is_down(self, tick: int) -> bool:
        return self.crashed_from is not None and tick >= self.crashed_from

    def run(self):
        while True:
            env = self.inbox.get()
            if env is None:
                break
            self.cluster.outbox.put(self.handle(env))

    def handle(self, env: Envelope) -> Reply:
        if self.is_down(env.tick):
            return Reply(self.worker_id, env.tick, responded=False)
        if any(start <= env.tick < end for start, end in self.pauses):
            if env.task is not None:
                self.pending = env.task
            return Reply(self.worker_id, env.tick, responded=False)

        task, self.pending = env.task or self.pending, None
        if task is None:
            return Reply(self.worker_id, env.tick, responded=True)

        reply = Reply(self.worker_id, env.tick, responded=True, task=task)
        try:
            if task.kind is TaskKind.MAP:
                self._run_map(task, reply)
            else:
                self._run_reduce(task, env.tick, reply)
        except Exception as e:
            reply.error = e
            return reply

        if not reply.lost_maps:
            self.completed += 1
            with self.cluster.lock:
                self.cluster.executions[task.kind] += 1
            if self.fail_after is not None and self.completed >= self.fail_after:
                # this reply is delivered; the worker is silent from the next tick on
                self.crashed_from = env.tick + 1
        return reply

    def _run_map(self, task: TaskSpec, reply: Reply) -> None:
        cfg = self.cluster.cfg
        parts: list[list[KeyValue]] = [[] for _ in range(cfg.num_reduce_tasks)]
        for split in task.splits:
            for key, value in self.cluster.map_fn(split):
                kv = KeyValue(bytes(key), bytes(value))
                parts[cfg.partition(kv.key)].append(kv)
        self.store[task.index] = parts
        reply.partition_sizes = [len(p) for p in parts]

    def _run_reduce(self, task: TaskSpec, tick: int, reply: Reply) -> None:
        groups: dict[bytes, list[bytes]] = defaultdict(list)
        for map_index, src in sorted(task.sources.items()):
            part = self.cluster.fetch(src, map_index, task.index, tick)
            if part is None:
                reply.lost_maps.append(map_index)
                continue
            for kv in part:
                groups[kv.key].append(kv.value)
        if reply.lost_maps:
            return
        out: list[KeyValue] = []
        for key in sorted(groups):
            for k, v in self.cluster.reduce_fn(key, sorted(groups[key])):
                out.append(KeyValue(bytes(k), bytes(v)))
        reply.output = out


class Cluster:
    """Worker threads, the input store and the durable output store; outlives any master."""

    def __init__(self, map_fn: MapFn, reduce_fn: ReduceFn, inputs: Sequence, cfg: JobConfig):
        self.map_fn = map_fn
        self.reduce_fn = reduce_fn
        self.inputs = list(inputs)
        self.cfg = cfg
        self.outbox: queue.Queue = queue.Queue()
        self.output_store: dict[int, list[KeyValue]] = {}
        self.executions: dict[TaskKind, int] = {TaskKind.MAP: 0, TaskKind.REDUCE: 0}
        self.lock = threading.Lock()
        self.workers = [Worker(w, self) for w in range(cfg.num_workers)]

    def start(self) -> None:
        for w in self.workers:
            w.start()

    def stop(self) -> None:
        for w in self.workers:
            w.inbox.put(None)
        for w in self.workers:
            w.join()

    def fetch(self, src: int, map_index: int, reduce_index: int, tick: int) -> Optional[list[KeyValue]]:
        holder = self.workers[src]
        if holder.is_down(tick):
            return None
        parts = holder.store.get(map_index)
        return None if parts is None else parts[reduce_index]


# ------------------------------------------------------------
# Master
# ------------------------------------------------------------
def _split_inputs(n_inputs: int, num_map_tasks: Optional[int]) -> list[list[int]]:
    if n_inputs == 0:
        return []
    groups = n_inputs if num_map_tasks is None else min(num_map_tasks, n_inputs)
    base, extra = divmod(n_inputs, groups)
    out, lo = [], 0
    for g in range(groups):
        hi = lo + base + (1 if g < extra else 0)
        out.append(list(range(lo, hi)))
        lo = hi
    return out


class Master:
    def __init__(self, cluster: Cluster, tasks: list[TaskRecord], assignment: list[list[int]]):
        self.cluster = cluster
        self.cfg = cluster.cfg
        self.tasks = tasks
        self.assignment = assignment          # map index -> input split indices
        self.monitor = heartbeat_monitor(self.cfg)
        self.tick = 0
        self.total_reassignments = 0
        self.checkpoints_written = 0
        self.master_recoveries = 0
        self.completions_since_checkpoint = 0
        self.rng = random.Random(self.cfg.seed)

    @classmethod
    def for_job(cls, cluster: Cluster) -> "Master":
        cfg = cluster.cfg
        assignment = _split_inputs(len(cluster.inputs), cfg.num_map_tasks)
        tasks = [TaskRecord(TaskKind.MAP, i, affinity=i % cfg.num_workers) for i in range(len(assignment))]
        tasks += [TaskRecord(TaskKind.REDUCE, r) for r in range(cfg.num_reduce_tasks)]
        return cls(cluster, tasks, assignment)

    @property
    def maps(self) -> list[TaskRecord]:
        return [t for t in self.tasks if t.kind is TaskKind.MAP]

    @property
    def reduces(self) -> list[TaskRecord]:
        return [t for t in self.tasks if t.kind is TaskKind.REDUCE]

    def _done(self) -> bool:
        return all(t.state is TaskState.COMPLETED for t in self.tasks)

    def _requeue(self, task: TaskRecord, worker: int, reassigned: bool = True) -> None:
        task.state = TaskState.IDLE
        task.contributing_attempt = None
        task.completed_at = None
        task.affinity = worker
        if reassigned:
            self.total_reassignments += 1
        logger.debug("task %s back to idle (worker %d)", task.task_id, worker)

    def _on_worker_failed(self, worker: int) -> None:
        logger.warning("worker %d declared failed at tick %d", worker, self.tick)
        reduce_pending = any(t.state is not TaskState.COMPLETED for t in self.reduces)
        for task in self.tasks:
            if task.worker != worker:
                continue
            if task.state is TaskState.IN_PROGRESS:
                self._requeue(task, worker)
            elif task.state is TaskState.COMPLETED and task.kind is TaskKind.MAP and reduce_pending:
                # map output lived on the failed worker
                self._requeue(task, worker)

    def _assign(self, live: list[int]) -> dict[int, TaskSpec]:
        busy = {t.worker for t in self.tasks if t.state is TaskState.IN_PROGRESS}
        free = [w for w in live if w not in busy]
        maps_done = all(t.state is TaskState.COMPLETED for t in self.maps)
        candidates = self.reduces if maps_done else self.maps
        if maps_done and any(self.monitor.missed.get(m.worker, 0) for m in self.maps):
            # a map output holder is silent: wait until it answers or is declared failed
            candidates = []
        idle = [t for t in candidates if t.state is TaskState.IDLE]
        out: dict[int, TaskSpec] = {}
        while idle and free:
            task, worker = schedule_next(idle, free)
            idle.remove(task)
            free.remove(worker)
            task.state = TaskState.IN_PROGRESS
            task.attempts += 1
            task.history.append(worker)
            task.assigned_at.append(self.tick)
            if task.kind is TaskKind.MAP:
                spec = TaskSpec(TaskKind.MAP, task.index,
                                splits=[self.cluster.inputs[i] for i in self.assignment[task.index]])
            else:
                spec = TaskSpec(TaskKind.REDUCE, task.index,
                                sources={m.index: m.worker for m in self.maps})
            out[worker] = spec
        return out

    def _apply(self, reply: Reply) -> None:
        event = self.monitor.observe(self.tick, reply.worker, reply.responded)
        if event is not None and event.status == "failed":
            self._on_worker_failed(reply.worker)
        if reply.task is None:
            return
        task = next(t for t in self.tasks if t.kind is reply.task.kind and t.index == reply.task.index)
        if task.state is not TaskState.IN_PROGRESS or task.worker != reply.worker:
            return  # stale result from before a master recovery
        if reply.error is not None:
            raise JobError(task.task_id, reply.error)
        if reply.lost_maps:
            # fetch retry, not a reassignment; the holder's failure requeues its maps
            self._requeue(task, reply.worker, reassigned=False)
            return
        task.state = TaskState.COMPLETED
        task.contributing_attempt = task.attempts
        task.completed_at = self.tick
        self.completions_since_checkpoint += 1
        if task.kind is TaskKind.MAP:
            task.partition_sizes = reply.partition_sizes
        else:
            self.cluster.output_store[task.index] = reply.output

    def run(self) -> None:
        while not self._done():
            if self.tick >= MAX_TICKS:
                raise RuntimeError(f"job did not finish within {MAX_TICKS} ticks")
            live = [w.worker_id for w in self.cluster.workers if w.worker_id not in self.monitor.failed]
            if not live:
                raise NoWorkersAvailableError()

            assignments = self._assign(live)
            for w in live:
                self.cluster.workers[w].inbox.put(Envelope(self.tick, assignments.get(w)))
            replies = [self.cluster.outbox.get() for _ in live]
            replies.sort(key=lambda r: r.worker)
            self.rng.shuffle(replies)
            errors = []
            for reply in replies:
                try:
                    self._apply(reply)
                except JobError as e:
                    errors.append(e)
            if errors:
                raise min(errors, key=lambda e: e.task_id)

            self.tick += 1
            if self.cfg.checkpoint_interval and self.completions_since_checkpoint >= self.cfg.checkpoint_interval:
                blob = self.checkpoint()
                if self.cfg.kill_master_at_checkpoint == self.checkpoints_written:
                    raise MasterFailure(blob)

    # ---- checkpoint / recovery ----------------------------------------
    def snapshot(self) -> dict:
        return {
            "tick": self.tick,
            "tasks": [t.to_dict() for t in self.tasks],
            "assignment": self.assignment,
            "monitor": self.monitor.state(),
            "events": [vars(e) for e in self.monitor.events],
            "total_reassignments": self.total_reassignments,
            "checkpoints_written": self.checkpoints_written,
            "master_recoveries": self.master_recoveries,
        }

    def checkpoint(self) -> bytes:
        self.checkpoints_written += 1
        self.completions_since_checkpoint = 0
        blob = checkpoint_master(self.snapshot())
        logger.info("checkpoint %d written at tick %d (%d bytes)", self.checkpoints_written, self.tick, len(blob))
        return blob

    def output(self) -> list[KeyValue]:
        out: list[KeyValue] = []
        for r in range(self.cfg.num_reduce_tasks):
            out.extend(self.cluster.output_store.get(r, []))
        return out

    def report(self, wall_time: float) -> JobReport:
        return JobReport(
            tasks=self.tasks,
            total_reassignments=self.total_reassignments,
            checkpoints_written=self.checkpoints_written,
            master_recoveries=self.master_recoveries,
            wall_time=wall_time,
            ticks=self.tick,
            events=list(self.monitor.events),
            executions={k.value: v for k, v in self.cluster.executions.items()},
        )


def checkpoint_master(state: dict) -> bytes:
    return encode_checkpoint(state)


def recover_master(blob: bytes, cluster: Cluster) -> Master:
    """
    Build a replacement master from a checkpoint. Completed tasks stay
    completed; tasks that were in progress go back to idle.
    """
    state = decode_checkpoint(blob)
    tasks = [TaskRecord.from_dict(d) for d in state["tasks"]]
    for task in tasks:
        if task.state is TaskState.IN_PROGRESS:
            task.state = TaskState.IDLE
    master = Master(cluster, tasks, [list(a) for a in state["assignment"]])
    master.tick = state["tick"]
    master.monitor.restore(state["monitor"])
    master.monitor.events = [WorkerEvent(**e) for e in state["events"]]
    master.total_reassignments = state["total_reassignments"]
    master.checkpoints_written = state["checkpoints_written"]
    master.master_recoveries = state["master_recoveries"] + 1
    master.rng = random.Random(cluster.cfg.seed + master.tick)
    logger.info("master recovered from checkpoint %d at tick %d", master.checkpoints_written, master.tick)
    return master


def run_job(map_fn: MapFn, reduce_fn: ReduceFn, inputs: Sequence, cfg: JobConfig) -> tuple[list[KeyValue], JobReport]:
    """
    Run a job to completion. Output is every reduce task's output in
    reduce-task order, each in key order.
    """
    start = time.perf_counter()
    cluster = Cluster(map_fn, reduce_fn, inputs, cfg)
    master = Master.for_job(cluster)
    if not cluster.inputs:
        master.tasks = []
        return [], master.report(time.perf_counter() - start)

    logger.info("job start: %d splits, %d map tasks, %d reduce tasks, %d workers",
                len(cluster.inputs), len(master.maps), cfg.num_reduce_tasks, cfg.num_workers)
    cluster.start()
    try:
        while True:
            try:
                master.run()
                break
            except MasterFailure as failure:
                logger.warning("master failed after checkpoint %d", master.checkpoints_written)
                master = recover_master(failure.blob, cluster)
    finally:
        cluster.stop()

    report = master.report(time.perf_counter() - start)
    logger.info("job done: %d ticks, %d reassignments, %d recoveries",
                report.ticks, report.total_reassignments, report.master_recoveries)
    return master.output(), report
