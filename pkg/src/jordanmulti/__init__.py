"""Exact computations with Jordan multialgebras of symmetric matrices."""
from .errors import (AmbientMismatchError, InvalidFrameError, InvalidLabelError, IrrationalSpectrumError,
                     JordanError, MembershipError, NoIdentityError, PreconditionError, StructureError)
from .exactla import (COMPLEX, REAL, GaussRational, Mat, Subspace, cayley_orthogonal, kron, rref,
                      subspace_contains, sym_part)
from .jordancore import (ClosureReport, MultialgebraInstance, a_product, center, generate_jordan_closure,
                         identity_element, is_closed, jordan_product, null_space, peirce_blocks,
                         spectral_projections, split_simple)
from .repforge import (CatalogLabel, Quaternion, catalogBuild, catalog_labels, classicalIrrep, dimD, phi,
                       quatQ, rho, scramble, spacesWU, spinAutoT, spinFactor)
from .completion import (ChainReport, LinearMap, assoc_closure, chain_check, classical_4chain, completion_of,
                         is_complete, iso_chain_compat)
from .grouprep import GpElement, commutantDim, conjugacyClasses, frobeniusSchur, gpMultiply, repEval
from .classify import Fingerprint, classifyAlgebra, fingerprint, peirceInvariants
from .twodim import (TwoDAlgebra, TwoDPair, buildCounterexample, buildSO3Multifield, check2dClosure,
                     complex3Chain, quatHermDet, realify)

# camelCase names for the snake_case operations
subspaceContains = subspace_contains
cayleyOrthogonal = cayley_orthogonal
symPart = sym_part
jordanProduct = jordan_product
aProduct = a_product
isClosed = is_closed
generateJordanClosure = generate_jordan_closure
identityElement = identity_element
nullSpace = null_space
spectralProjections = spectral_projections
peirceBlocks = peirce_blocks
splitSimple = split_simple
assocClosure = assoc_closure
completionOf = completion_of
isComplete = is_complete
chainCheck = chain_check
classical4Chain = classical_4chain
isoChainCompat = iso_chain_compat
