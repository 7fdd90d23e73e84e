"""Exit laws and double-barrier pricing for hyperexponential jump diffusions."""

from ._core import (  # noqa: F401
    BarrierContract,
    JumpComponent,
    LevyExitError,
    LevyModelSpec,
    factorize,
    invert_laplace,
    load_model,
    maximum_law,
    mc_range_prob,
    phi,
    price,
    prob_vupx,
    prob_vx,
    psi,
    psibar,
    range_prob,
    two_sided_exit,
    ux,
)
