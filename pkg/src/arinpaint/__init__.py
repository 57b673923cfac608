"""Autoregressive inpainting of gaps in audio signals."""
from .audio_io import read_mask, read_results, read_wav, write_mask, write_results, write_wav
from .errors import InpaintingError
from .estimation import ARModel, Estimator, autocorrelation, estimate, estimate_burg, estimate_lpc, levinson_durbin
from .evaluation import EvalRecord, aggregate, sdr, sdr_inpainted
from .janssen import JanssenConfig, gram_band, janssen_iterate, solve_missing
from .methods import (InpaintConfig, Method, Window, crossfade_weights, inpaint,
                      inpaint_extrapolation, inpaint_janssen_framewise, inpaint_janssen_gapwise)
from .prediction import extrapolate_backward, extrapolate_forward, residual
from .signals import Gap, GapMask, Segment, Signal, extract_segment, generate_gaps, project_consistent

__version__ = "0.1.0"
