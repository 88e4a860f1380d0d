"""Directed information-flow networks for financial time series.

Pipeline: daily prices -> log returns -> equal-width symbolization ->
pairwise symbolic transfer entropy -> net-flow orientation -> directed
weighted network -> outgoing/incoming maximum spanning arborescences ->
maximal information-flow paths, with whole-sample, yearly, event-window,
and root-specificity studies on top.
"""

from .analysis import (
    DegreeHeatmap,
    MsaBundle,
    SpecificityResult,
    TurmoilStudy,
    TurmoilWindows,
    YearlyMsaReport,
    degree_heatmap,
    pearson,
    returns_panel,
    root_occurrences,
    specificity_study,
    turmoil_study,
    whole_sample_msas,
    yearly_reports,
)
from .arborescence import (
    Arborescence,
    InfoFlowPath,
    arborescence_to_dot,
    arborescence_to_json,
    degrees,
    enumerate_arborescences,
    max_spanning_arborescence,
    maximal_information_flow_path,
)
from .entropy import (
    DaiMatrix,
    TeMatrix,
    TripletDistribution,
    dai_matrix,
    effective_transfer_entropy,
    te_matrix,
    te_matrix_to_csv,
    transfer_entropy,
    triplet_distribution,
)
from .network import InfoFlowNetwork, build_network, network_to_dot, network_to_json
from .symbolize import (
    DEFAULT_Q,
    Partition,
    SymbolSeries,
    encode,
    make_partition,
    symbolize_returns,
)
from .synth import (
    CoupledBinaryProcess,
    Coupling,
    Segment,
    SyntheticDataset,
    analytic_te_coupled_binary,
    dataset_to_csv,
    demo_dataset,
    generate_coupled_binary,
    generate_dataset,
)
from .timeseries import (
    JB_CRITICAL_1PCT,
    DatasetError,
    PriceSeries,
    ReturnSeries,
    SectorMeta,
    SummaryStats,
    load_dataset,
    load_sector_names,
    log_returns,
    slice_returns,
    summary_stats,
)

__version__ = "0.1.0"
