from .encoding import (
    DEFAULT_MARGIN_BITS,
    BitString,
    bits_to_scalar,
    min_entropy_bits,
    scalar_to_bits,
)
from .groups import (
    GroupParams,
    SchnorrGroup,
    ShortWeierstrassCurve,
    alt_bn128_group,
    group_by_name,
    secp256k1_group,
    tiny_group,
)
from .pedersen import Commitment, Opening, commit, hom_combine, open_verify
from .shamir import Share, ShareSet, reconstruct, shares_from_polynomials, split
from .signing import KeyPair, keygen, sign, verify_sig

__all__ = [
    "DEFAULT_MARGIN_BITS",
    "BitString",
    "Commitment",
    "GroupParams",
    "KeyPair",
    "Opening",
    "SchnorrGroup",
    "Share",
    "ShareSet",
    "ShortWeierstrassCurve",
    "alt_bn128_group",
    "bits_to_scalar",
    "commit",
    "group_by_name",
    "hom_combine",
    "keygen",
    "min_entropy_bits",
    "open_verify",
    "reconstruct",
    "scalar_to_bits",
    "secp256k1_group",
    "shares_from_polynomials",
    "sign",
    "split",
    "tiny_group",
    "verify_sig",
]
