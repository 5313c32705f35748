"""Fetal ECG extraction with affine combinations of LMS and RLS adaptive filters."""

from .combination import (Combination, ComboStepOutput, CombinationRunResult,
                          make_combination, run_combination, sigmoid_mixing)
from .errors import (AncError, ConditioningError, ConfigError, ContractError,
                     DivergenceError, FetchError, InputError, InsufficientDataError,
                     ParseError, UndefinedMetricError)
from .filters import LMS, NLMS, RLS, FilterRunResult, StepOutput, make_filter, run_filter
from .metrics import (DetectionReport, MatchResult, detection_report, match_peaks,
                      mse_curve, snr_db)
from .qrs import (FETAL, MATERNAL, DetectorConfig, PeakList, format_peaks, heart_rate,
                  pan_tompkins, parse_peaks)
from .recording import fetch_dataset, parse_recording, read_recording, serialize_recording
from .signals import MultichannelRecording, Regressor, Signal, power, remove_mean, tap_matrix

__version__ = "0.1.0"
