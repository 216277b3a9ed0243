"""Corrupted marginals and the statistical experiments built on them."""
from .channels import (KINDS, ChannelModel, ChannelState, adjoint_channel, apply_channel,
                       variational_channel_state)
from .experiments import (MSE_METHODS, OBSERVABLES, ChannelCurveReport, ConcentrationReport,
                          GroundTruth, ground_truth, method_config, observables,
                          run_channel_curve, run_concentration_study, run_mse_experiment)
from .gaussian import GaussianNoiseModel, corrupt_gaussian
from .reports import ExperimentReport, mse_decomposition, standard_error
