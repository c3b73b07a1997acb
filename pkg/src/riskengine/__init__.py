"""Risk engine: GJR-GARCH volatility with Pearson type-IV innovations
and filtered-historical-simulation VaR / Expected Shortfall."""

from .diagnostics import (
    CorrelationMatrix,
    DiagnosticsRow,
    arch_lm,
    correlation_matrix,
    diagnostics_row,
    jarque_bera,
    ljung_box,
    moments,
)
from .fhs import (
    RiskReport,
    RiskSpec,
    SimulatedSample,
    basel_consistency,
    build_risk_report,
    es_from_sample,
    parametric_var,
    run_fhs,
    var_from_sample,
)
from .gjr_garch import (
    FilterOutput,
    FitResult,
    GjrParams,
    SimulationState,
    filter_returns,
    fit,
    neg_log_likelihood,
    simulate,
)
from .market_data import (
    CsvSchema,
    PriceSeries,
    ReturnSeries,
    align_panel,
    fill_calendar_gaps,
    log_returns,
    parse_price_csv,
    write_price_csv,
)
from .numerics import OptimizerOptions, minimize_simplex
from .pearson4 import Piv

__version__ = "0.1.0"
