"""Exact torsion-class computations for tame hereditary path algebras and their base change over k[t]."""

__version__ = "0.1.0"

from .exact_linalg import GF, QQ, RationalFunctionField  # noqa: E402
from .quiver import Quiver, classify, parse_quiver, kronecker, linear_A, D4_tilde, A2_tilde  # noqa: E402
from .reps import (  # noqa: E402
    Representation, RepMap, hom_space, ext1_dim, decompose, is_isomorphic, ar_translate,
    gen_membership, parse_rep, format_rep, parse_field,
)
from .ar_structure import structure, realize, describe, tube_inventory, component_of, regular_length  # noqa: E402
from .torsion import (  # noqa: E402
    Tors, FF, Upper, SupportTauTiltingPair, parse_handle, handle_membership, mutate, enumerate_ftors,
    check_characterization,
)
from .base_change_dvr import (  # noqa: E402
    RQModule, parse_rqmodule, snf_dvr, filtration_pair, spread_iso, r_pq, extend_scalars, function_field,
)
from .compatibility import (  # noqa: E402
    TorsionFamily, parse_family, is_compatible, glue_witness, phi_t, verify_main_theorem,
)
