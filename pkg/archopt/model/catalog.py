"""Bundled cloud instance catalog.

Speed factor, maximum power (W) and hourly cost (USD/h) of the Amazon EC2
instance types the search may deploy to.
"""

from .architecture import InstanceType

DEFAULT_CATALOG: tuple[InstanceType, ...] = (
    InstanceType("d2.2xlarge", speed_factor=4.67, power_max=83.4, cost=0.46),
    InstanceType("m6i.xlarge", speed_factor=3.48, power_max=32.4, cost=0.13),
    InstanceType("t2.medium", speed_factor=2.33, power_max=14.1, cost=0.03),
    InstanceType("t2.micro", speed_factor=1.17, power_max=6.40, cost=0.004),
    InstanceType("m5ad.xlarge", speed_factor=1.14, power_max=29.9, cost=0.25),
)


def default_catalog() -> dict[str, InstanceType]:
    """The bundled catalog keyed by instance name."""
    return {instance.name: instance for instance in DEFAULT_CATALOG}
