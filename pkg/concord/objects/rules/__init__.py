from .equal_surplus import EqualSurplus
