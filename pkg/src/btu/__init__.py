"""Balanced Tanner Units: construction, enumeration and girth search."""

from .errors import DomainError, GuardRefusal, InvariantViolation
from .microparts import (
    MicroPartition,
    OrderedLabeledPartition,
    UnorderedLabeledPartition,
    assemble_permutation,
    count_label_mappings,
    enumerate_cycle_orders,
    enumerate_label_mappings,
    enumerate_micropartitions,
)
from .partitions import (
    Partition,
    PartitionFamilySpec,
    enumerate_p2,
    factorize_m,
    min_component,
    optimal_partitions,
    scale,
)
from .permutations import (
    CompatibleSet,
    Permutation,
    count_f,
    enumerate_compatible,
    is_compatible,
    partition_between,
    psi,
)
from .search import (
    SearchBudget,
    SearchResult,
    algorithm_alpha,
    algorithm_alpha1,
    hierarchy_search,
    implicit_enumeration,
    pipeline_search,
)
from .tanner import (
    Btu,
    CycleReport,
    all_pair_partitions,
    crossblock_decompose,
    cycle_report,
    export,
    girth,
    girth_upper_bound,
    known_cycles,
    micropartition_cycle_bound,
    puncture,
)

__version__ = "0.1.0"
