"""Nonlinear acoustic bubble simulator, square-pulse music encoder, and
single-node physical reservoir benchmark."""

from .physics import (FluidProperties, BubbleConfig, DriveConfig,
                      DimensionlessSet, dimensionless_groups,
                      natural_frequency, relaxation_time)
from .score import (NoteEvent, Score, PressureSignal, BinarySequence,
                    key_frequency, parse_score, render_pulse_train,
                    encode_binary)
from .solver import (BubbleState, Trajectory, LinearOscillatorParams,
                     km_rhs, simulate, scattered_pressure, linear_oracle,
                     linear_step_response, step_pulse)
from .analysis import (PowerSpectrum, Envelope, power_spectrum,
                       dominant_frequency, envelope, fit_relaxation,
                       pearson_r2, harmonic_ratio)
from .reservoir import (EsnConfig, EsnWeights, ReadoutModel, CapacityReport,
                        init_esn_weights, esn_update, run_esn,
                        harvest_virtual_neurons, train_readout, predict,
                        parity_target, stm_capacity, pc_capacity)
from .audio import AudioBuffer, resample, normalize, write_wav, read_wav
from .errors import (DomainError, ParseError, CollapseError, SingularityError)

__version__ = "0.1.0"
