"""Controllers package."""

from src.controllers.data_controller import cmd_ingest, cmd_synth, load_frame
from src.controllers.experiment_controller import cmd_ablate, cmd_gradcheck, cmd_sweep
from src.controllers.model_controller import cmd_evaluate, cmd_importance, cmd_predict, cmd_train, predict_slot

__all__ = [
    'cmd_ingest', 'cmd_synth', 'load_frame', 'cmd_ablate', 'cmd_gradcheck', 'cmd_sweep',
    'cmd_evaluate', 'cmd_importance', 'cmd_predict', 'cmd_train', 'predict_slot',
]
