"""Multifractal detrended fluctuation analysis of return series and their extrema sequences."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DataError,
    DegeneracyError,
    InsufficientDataError,
    MFSeriesError,
    WidthUndefinedError,
)
from .series import (  # noqa: E402
    ExtremaSequence,
    Profile,
    TimeSeries,
    extrema_sequence,
    log_returns,
    normalize_returns,
    profile,
    shuffle,
)
from .correlation import autocorrelation, classify_decay, tail_exponent  # noqa: E402
from .mfdfa import (  # noqa: E402
    FluctuationSurface,
    GridSpec,
    HurstSpectrum,
    fit_hurst,
    fluctuation_surface,
    partition_tau,
    segment_variances,
)
from .spectrum import (  # noqa: E402
    ComplexityParams,
    SingularitySpectrum,
    compare_surrogate,
    fit_spectrum,
    legendre_transform,
)
from .synth import GeneratorSpec, generate  # noqa: E402
