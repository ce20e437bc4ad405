"""Exceptions raised by the kernels, the MapReduce engine and the harness."""


class OrderMismatchError(ValueError):
    def __init__(self, left: int, right: int):
        super().__init__(f"order mismatch: {left} vs {right}")
        self.left = left
        self.right = right


class TextFormatError(ValueError):
    """Malformed matrix or graph text."""
    pass


class VertexOutOfRangeError(ValueError):
    def __init__(self, vertex: int, vertex_count: int):
        super().__init__(f"vertex id out of range: {vertex} not in [0, {vertex_count})")
        self.vertex = vertex


class NegativeCycleError(ValueError):
    def __init__(self, vertex: int):
        super().__init__(f"negative cycle through vertex {vertex}")
        self.vertex = vertex


class CheckpointCorruptError(ValueError):
    def __init__(self, reason: str):
        super().__init__(f"checkpoint corrupt: {reason}")


class NoWorkersAvailableError(RuntimeError):
    def __init__(self):
        super().__init__("no workers available")


class JobError(RuntimeError):
    """A user map or reduce function raised while running a task."""

    def __init__(self, task_id: str, cause: BaseException):
        super().__init__(f"task {task_id} failed: {cause!r}")
        self.task_id = task_id
        self.cause = cause


class MasterFailure(RuntimeError):
    """Injected master crash; carries the last checkpoint blob."""

    def __init__(self, blob: bytes):
        super().__init__("master killed after checkpoint")
        self.blob = blob


class VerificationError(RuntimeError):
    def __init__(self, kernel: str, detail: str = ""):
        super().__init__(f"kernel {kernel} produced a wrong result {detail}".strip())
        self.kernel = kernel
