"""Exact computations with oriented-cohomology rings of split quadrics
and the decomposition types of their motives."""

from . import coefficients, corr, forms, mdt, motives, quadring, render, steenrod
from .coefficients import (CoeffElement, CoeffRing, FormalGroupLaw, Theory,
                           chow, chow_mod2, morava, morava_connective_mod2,
                           morava_mod2, morava_v_one, multiplicative)
from .forms import FormProfile, SplittingTower, build_tower, kn_kernel_index
from .mdt import (MDTDiagram, check_outer_excellent, chow_diagram,
                  chow_to_morava, classify_k2, kernel_shift_equiv,
                  morava_diagram, morava_to_chow, stable_reduce)
from .motives import (MotiveExpr, base_change_kill, detect_count,
                      pfister_motive, small_kahn_decomposition, symbol,
                      tensor)
from .quadring import QuadClass, SplitQuadric, degree, h_power, mul
from .steenrod import (BPMonomial, LaurentClassPoly, eta, lucas_binom_mod2,
                       phi_trace, steenrod_lemma_predicates, steenrod_total,
                       steenrod_total_product)

__version__ = "0.1.0"
