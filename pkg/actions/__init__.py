from .experiment_actions import ExperimentActions
from .topology_actions import TopologyActions
from .settings_actions import SettingsActions

__all__ = ['ExperimentActions', 'TopologyActions', 'SettingsActions']
