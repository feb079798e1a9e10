# Copyright 2026 The phlat Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================

"""Permutation-Hermite equivalence of integer matrices."""

from phlat._src import counting
from phlat._src import density
from phlat._src import duality
from phlat._src import errors
from phlat._src import invariants
from phlat._src import orbitlab
from phlat._src import structure
from phlat._src.equivalence import canonical_representative
from phlat._src.equivalence import ph_equivalent
from phlat._src.exact_linalg import AbelianGroup
from phlat._src.exact_linalg import hermite_form
from phlat._src.exact_linalg import IntMatrix
from phlat._src.exact_linalg import parse_matrix
from phlat._src.exact_linalg import smith_form
from phlat._src.invariants import invariant_lattice
from phlat._src.invariants import lattice_match
from phlat._src.invariants import Verdict
from phlat._src.settings import LIMITS
from phlat._src.structure import StandardForm
from phlat._src.structure import Subset

__version__ = "0.0.1"

__all__ = (
    "AbelianGroup",
    "canonical_representative",
    "counting",
    "density",
    "duality",
    "errors",
    "hermite_form",
    "IntMatrix",
    "invariant_lattice",
    "invariants",
    "lattice_match",
    "LIMITS",
    "orbitlab",
    "parse_matrix",
    "ph_equivalent",
    "smith_form",
    "StandardForm",
    "structure",
    "Subset",
    "Verdict",
)
