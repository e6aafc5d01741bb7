"""Shared exception types."""


class ConfigurationError(ValueError):
    """Invalid parameters, inconsistent shapes, or bad config-file contents."""


class SimulationDiverged(RuntimeError):
    """Membrane values left the finite range during a simulation run."""

    def __init__(self, message, step=None, time=None, iteration=None):
        super().__init__(message)
        self.step = step
        self.time = time
        self.iteration = iteration
