"""Operation counters used to check the advertised cost bounds."""

from dataclasses import dataclass, field


@dataclass
class OpCounters:
    """Mutable tally of the operations the pipeline performs.

    rational_ops    ring operations (add/mul of rationals) in polynomial evaluation
    data_adds       integer additions spent completing the left/right count matrices
    graph_adds      integer decrements spent matching half-branches into edges
    derivative_ops  ring operations spent in higher-derivative classification
    isolation_calls number of univariate root-isolation invocations
    """

    rational_ops: int = 0
    data_adds: int = 0
    graph_adds: int = 0
    derivative_ops: int = 0
    isolation_calls: int = 0

    def as_dict(self):
        return {
            "rational_ops": self.rational_ops,
            "data_adds": self.data_adds,
            "graph_adds": self.graph_adds,
            "derivative_ops": self.derivative_ops,
            "isolation_calls": self.isolation_calls,
        }
