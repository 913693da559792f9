"""Tunable alpha-GAN toolkit.

alpha-loss in its three forms, the Arimoto divergence family and its limits,
the closed-form equilibrium with brute-force oracles, the margin-loss
reconstruction of the divergence generator, convergence experiments and a
small numpy GAN trainer.
"""

from .alpha_loss import AlphaParam, check_uniform_guess_condition, loss_binary, loss_margin, loss_prob
from .arimoto import arimoto_divergence, f_alpha, jsd, metric_power, psi_alpha, sq_hellinger, tv
from .convergence import DistSequence, Verdict, divergence_trace, equivalence_check, lin_bound_check
from .equilibrium import brute_force_discriminator, generator_objective, optimal_discriminator
from .gan_train import TrainConfig, TrainReport, eval_mode_coverage, grads_value_alpha, train
from .kernels import BACKEND
from .mlp import MlpModel, forward
from .prob_core import DiscreteDistribution, Rng, bernoulli, gaussian1d, gaussian_mixture1d, make_discrete, ring2d, sample
from .value_game import (
    ConstantDiscriminator,
    NeuralDiscriminator,
    TabularDiscriminator,
    general_loss_value,
    value_alpha_exact,
    value_alpha_mc,
)
from .variational import margin_generator, margin_infimum, perspective_gap, perspective_symmetry_check, reconstruct_f

__version__ = "0.1.0"
