"""Iterated planar disc packings with a parity membership oracle.

Public surface: geometry primitives, the packing operator, the nested
hierarchy with point location and indicator readings, analytic probes, a
canonical document format, a verification suite, and SVG rendering.
"""

from .geometry import (
    Disc,
    Point,
    Sector,
    UnitDirection,
    disc_contains,
    disc_gap,
    ray_hits_disc,
    sector_contains,
    subtended_angle,
    unit_diff,
)
from .packing import (
    PLANE,
    SAFETY_SHRINK,
    DiscRegion,
    EnlargedSystem,
    EnumerationCapExceeded,
    PackedDisc,
    PackingSystem,
    Region,
    RegionExhausted,
    area_sum,
    build_packing,
    dense_point,
    dense_points,
    dist_to_region_complement,
    enlarge,
    first_radius,
    next_center_index,
    next_radius,
    region_diameter,
)
from .hierarchy import (
    DiscNode,
    DiscTree,
    IndicatorReading,
    LevelSpec,
    LocationPath,
    ResourceCapExceeded,
    avoids_enlarged_tail,
    build_hierarchy,
    first_regular_sample,
    indicator,
    interior_samples,
    level_union_area,
    locate,
)
from .analysis import (
    BlockageReport,
    DisplacedBall,
    DisplacedBallReport,
    FlipWitness,
    QuotientSample,
    SectorProbeResult,
    WitnessSearch,
    angular_blockage,
    directional_quotients,
    displaced_ball_check,
    find_flip_witness,
    sector_quotient_probe,
)
from .document import DocumentError, load_tree, save_tree, tree_to_document
from .verify import VerifyReport, run_verification
from .render import render_svg, save_svg

__version__ = "0.1.0"
