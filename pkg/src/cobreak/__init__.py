"""Coherence-breaking quantum channels: detection, index and unitary amendment."""

from .amendment import (
    AmendmentResult,
    BlockRotationPlan,
    UnitaryParams,
    amend_interleaved,
    amend_post,
    amend_search_interleaved,
    amend_search_post,
    block_rotation_unitary,
    general_unitary,
    impossibility_post_square,
    transfer_matrix_closed_form,
    transfer_matrix_of_unitary,
)
from .analysis import (
    EXCEEDS_CAP,
    CbcVerdict,
    IndexResult,
    cbc_index,
    family1_cbc,
    family1_index2,
    family2_cbc,
    family2_index2,
    is_cbc_oracle,
    is_cbc_structural,
    is_incoherent_kraus,
    is_nc,
)
from .estimators import ChannelTransformer, CoherenceBreakingAnalyzer, UnitaryAmender
from .exceptions import (
    ArgumentError,
    CobreakError,
    ConsistencyError,
    DomainError,
    PreconditionError,
    SpecParseError,
    ValidationError,
)
from .qchannel import (
    AffineRep,
    KrausChannel,
    NCFamilyParams,
    affine_apply,
    apply,
    choi,
    compose,
    iterate,
    kraus_to_affine,
    nc_family_channel,
    unitary_channel,
    validate_cptp,
)
from .qstate import c_l1, dephase, from_coherence_vector, random_state, to_coherence_vector

__version__ = "0.1.0"
