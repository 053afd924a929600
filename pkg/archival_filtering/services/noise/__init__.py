from .registry import NoiseRegistry
from .generator import RNG_ALGORITHM, add_gaussian, add_salt_pepper, add_speckle, apply_noise, make_rng
