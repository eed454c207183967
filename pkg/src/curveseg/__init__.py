"""Topology of real algebraic plane curves over a vertical strip.

From an exact rational equation g(x, y) = 0, the package isolates the
critical abscissas of the vertical projection, samples fibers over a good
partition, completes half-branch counts through a global balance of branches
between adjacent fibers, and realizes the result as a straight-line graph
isotopic to the curve.
"""

from .algebra import (
    BivarPoly,
    UnivarPoly,
    discriminant_y,
    eval_bivar,
    eval_univar,
    partial_x,
    partial_y,
    shear,
    slice_at_x,
    squarefree_part,
)
from .certified import (
    Box,
    Sign,
    TensorBernstein,
    classify_boxes,
    fiber_box_cover,
    locate_critical_boxes,
    sign_on_box,
    to_tensor_bernstein,
)
from .cli import RunConfig, TopologyReport, emit_dot, emit_json, emit_svg, run
from .counters import OpCounters
from .parsing import canonical_text, parse_polynomial
from .roots import (
    BernsteinPoly,
    RootInterval,
    isolate_roots,
    refine_interval,
    root_bound,
    sign_variations,
    to_bernstein,
)
from .sweep import (
    FiberPoint,
    FiberTable,
    GoodPartition,
    PartitionEntry,
    PipelineResult,
    build_good_partition,
    check_general_position,
    compute_fiber,
    critical_values,
    general_position_pipeline,
    normalize_curve,
)
from .topology import (
    BranchClass,
    CurveData,
    TopoGraph,
    build_graph,
    complete_to_data,
    connected_components,
    derivative_test,
    refine,
)

__version__ = "0.1.0"
