class ConvergenceWarning(UserWarning):
    pass


class DegenerateModeWarning(UserWarning):
    pass


class SparsityFilterWarning(UserWarning):
    pass


class UnderdeterminedWarning(UserWarning):
    pass


class ExtrapolationWarning(UserWarning):
    pass
