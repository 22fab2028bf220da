"""groupaes: aesthetic quality assessment for group photographs.

Combines seven face-state features (open eyes, occlusion, orientation,
gaze, blur, smile, horizontal centering) with 83 generic aesthetic
features, trains and evaluates an SVM classifier and a random-forest
regressor, and collects human ratings through a small annotation service.
"""

__version__ = "0.1.0"

from .config import Config, ThresholdConfig, load_config
from .group_features import GroupFeatures, NoFacesError, extract_group
from .faces import FaceInfo, FaceSequence, parse_face_annotations
from .vector import FEATURE_NAMES, read_feature_csv, write_feature_csv

__all__ = [
    "Config",
    "FEATURE_NAMES",
    "FaceInfo",
    "FaceSequence",
    "GroupFeatures",
    "NoFacesError",
    "ThresholdConfig",
    "extract_group",
    "load_config",
    "parse_face_annotations",
    "read_feature_csv",
    "write_feature_csv",
]
