"""Loss hyperparameter sets tuned for VGG16 and ResNet50 backbones on CUB and ImageNet.

Selecting a preset overrides lambda_sim, lambda_norm, lambda_drop, tau_fg,
tau_bg, gamma and p of a LossWeightsConfig.
"""

LOSS_WEIGHT_PRESETS = {
    "cub_vgg16": {
        "lambda_sim": 0.5,
        "lambda_norm": 0.15,
        "lambda_drop": 3.0,
        "tau_fg": 0.6,
        "tau_bg": 0.1,
        "gamma": 0.8,
        "p": 0.5,
    },
    "cub_resnet50": {
        "lambda_sim": 0.6,
        "lambda_norm": 0.07,
        "lambda_drop": 2.0,
        "tau_fg": 0.4,
        "tau_bg": 0.2,
        "gamma": 0.8,
        "p": 0.25,
    },
    "imagenet_vgg16": {
        "lambda_sim": 0.5,
        "lambda_norm": 0.2,
        "lambda_drop": 3.0,
        "tau_fg": 0.5,
        "tau_bg": 0.3,
        "gamma": 0.8,
        "p": 0.5,
    },
}

# former/latter learning rates used with pretrained backbones
OPTIMIZER_PRESETS = {
    "cub_vgg16": {"lr_former": 4e-3, "lr_latter": 2e-2},
    "cub_resnet50": {"lr_former": 2e-3, "lr_latter": 2e-2},
    "imagenet_vgg16": {"lr_former": 2e-5, "lr_latter": 1e-4},
}
