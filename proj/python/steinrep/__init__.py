# Copyright 2026 The steinrep Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reparameterization gradient estimators checked against quadrature oracles."""

from ._core import (
    Error,
    GradEstimate,
    MixingSpec,
    RandomStream,
    TestFunction,
    abs_sum,
    bessel_k,
    cholesky,
    compare_variance,
    constant_function,
    expect_gaussian,
    expect_gvm,
    gauss_hermite_nodes,
    gaussian_grad,
    gaussian_oracle_gradient,
    gvm_grad,
    gvm_logpdf,
    gvm_oracle_gradient,
    implicit_exponential_grad,
    log_bessel_k,
    log_norm_cdf,
    log_sum_exp,
    norm_cdf,
    quadratic,
    run_experiment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
