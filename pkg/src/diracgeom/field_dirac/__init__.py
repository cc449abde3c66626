"""Dirac structures on R^n with rational-function coefficients."""

from .calculus import (
    Section,
    ThreeForm,
    contract,
    courant_bracket,
    d_function,
    d_oneform,
    d_twoform_on,
    directional,
    dorfman_bracket,
    hamiltonian_of_bivector,
    is_closed_twoform,
    is_poisson,
    jacobiator,
    lie_bracket,
    lie_derivative_form,
    pairing_sections,
    poisson_bracket,
    twisted_courant_bracket,
)
from .images import (
    DiracMapResult,
    ForwardReport,
    ProbeRecord,
    RankReport,
    backward_image,
    check_dirac_map,
    forward_image,
)
from .maps import PolyMap
from .probes import DEFAULT_COUNT, probe_points
from .structures import (
    DiracField,
    HamiltonianField,
    IntegrabilityVerdict,
    admissible_bracket,
    anchor_and_algebroid_bracket,
    courant_tensor,
    gauge_field,
    gauge_section,
    hamiltonian_vf,
    is_integrable,
    is_invariant_under,
    lie_derivative_section,
    pointwise,
    section_of_function,
)

__all__ = [
    "Section",
    "ThreeForm",
    "contract",
    "courant_bracket",
    "d_function",
    "d_oneform",
    "d_twoform_on",
    "directional",
    "dorfman_bracket",
    "hamiltonian_of_bivector",
    "is_closed_twoform",
    "is_poisson",
    "jacobiator",
    "lie_bracket",
    "lie_derivative_form",
    "pairing_sections",
    "poisson_bracket",
    "twisted_courant_bracket",
    "DiracMapResult",
    "ForwardReport",
    "ProbeRecord",
    "RankReport",
    "backward_image",
    "check_dirac_map",
    "forward_image",
    "PolyMap",
    "DEFAULT_COUNT",
    "probe_points",
    "DiracField",
    "HamiltonianField",
    "IntegrabilityVerdict",
    "admissible_bracket",
    "anchor_and_algebroid_bracket",
    "courant_tensor",
    "gauge_field",
    "gauge_section",
    "hamiltonian_vf",
    "is_integrable",
    "is_invariant_under",
    "lie_derivative_section",
    "pointwise",
    "section_of_function",
]
