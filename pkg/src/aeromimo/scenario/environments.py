"""Propagation environment constants.

Single source of truth for the air-to-ground propagation classes. The logistic
LoS-probability constants (a, b) and the excess losses on top of free-space
path loss come from the standard low-altitude-platform measurement fits
(al-Hourani et al.); the table can be overridden per run through the config
file's `constants` section.

Excess losses are stored as positive dB magnitudes and are *subtracted* from
the free-space gain (an NLoS link is weaker than an LoS link).
"""

from dataclasses import dataclass

__all__ = ["Environment", "ENVIRONMENTS"]


@dataclass(frozen=True)
class Environment:
    name: str
    a: float            # logistic LoS-probability offset
    b: float            # logistic LoS-probability slope (1/deg)
    excess_los_db: float    # extra loss on LoS links (dB)
    excess_nlos_db: float   # extra loss on NLoS links (dB)

    def replace(self, **kwargs) -> "Environment":
        fields = dict(
            name=self.name, a=self.a, b=self.b,
            excess_los_db=self.excess_los_db, excess_nlos_db=self.excess_nlos_db,
        )
        fields.update(kwargs)
        return Environment(**fields)


ENVIRONMENTS = {
    "suburban": Environment("suburban", a=4.88, b=0.43, excess_los_db=0.1, excess_nlos_db=21.0),
    "urban": Environment("urban", a=9.61, b=0.16, excess_los_db=1.0, excess_nlos_db=20.0),
    "dense_urban": Environment("dense_urban", a=12.08, b=0.11, excess_los_db=1.6, excess_nlos_db=23.0),
}

# Free-space path loss: gain_dB = 10*log10(rho / d^alpha)
PATHLOSS_RHO_DB = -55.0   # gain at 1 m (dB)
PATHLOSS_EXPONENT = 3.0
