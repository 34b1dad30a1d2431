"""
Serializers for run configuration files.
"""
from rest_framework import serializers

METHODS = [
    "gcn",
    "random",
    "tgd",
    "hcref",
    "hc1",
    "hc2",
    "cons_h",
    "cons_d",
    "hc_uncon",
]

VICTIMS = ["train", "test-with-true-labels", "all-with-pseudo-labels"]


class RunConfigSerializer(serializers.Serializer):
    """Serializer for config.json; every field is required after merging."""

    dataset = serializers.CharField()
    method = serializers.ChoiceField(choices=METHODS)
    epsilon = serializers.FloatField()
    T_atk = serializers.IntegerField(min_value=0)
    mu0 = serializers.FloatField(min_value=0)
    mu_decay_exponent = serializers.FloatField(min_value=0)
    attack_loss = serializers.ChoiceField(choices=["CE", "CW"])
    cw_kappa = serializers.FloatField(min_value=0)
    alpha = serializers.FloatField(min_value=0)
    beta = serializers.FloatField(min_value=0)
    epochs_per_phase = serializers.IntegerField(min_value=1)
    lr = serializers.FloatField(min_value=0)
    weight_decay = serializers.FloatField(min_value=0)
    hidden = serializers.IntegerField(min_value=1)
    seed = serializers.IntegerField(min_value=0)
    random_del_rate = serializers.FloatField(min_value=0, max_value=1)
    optimizer = serializers.ChoiceField(choices=["adam", "sgd"])
    mean_reduce = serializers.BooleanField()
    linear_head = serializers.BooleanField()
    detach_natural = serializers.BooleanField()
    supervise_all = serializers.BooleanField()
    normalize_features = serializers.BooleanField()
    victim = serializers.ChoiceField(choices=VICTIMS)
    num_samples = serializers.IntegerField(min_value=1)
    eval_attack_iters = serializers.IntegerField(min_value=0)
    series_every = serializers.IntegerField(min_value=0)
    seeds = serializers.ListField(
        child=serializers.IntegerField(min_value=0), allow_empty=False
    )
    dropout = serializers.FloatField(required=False, default=0.0)

    def get_fields(self):
        """Add the `lambda` key, which is not a valid attribute name."""
        fields = super().get_fields()
        fields["lambda"] = serializers.FloatField(min_value=0)
        return fields

    def validate_epsilon(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("epsilon must lie in (0, 1).")
        return value

    def validate_dropout(self, value):
        if value != 0.0:
            raise serializers.ValidationError("dropout is fixed at 0.0.")
        return value


class MisclassificationSerializer(serializers.Serializer):
    train_eps = serializers.ListField(child=serializers.FloatField(min_value=0))
    attack_eps = serializers.ListField(child=serializers.FloatField(min_value=0))


class HyperparamSerializer(serializers.Serializer):
    param = serializers.ChoiceField(choices=["alpha", "beta"])
    values = serializers.ListField(child=serializers.FloatField(min_value=0))


class GridSerializer(serializers.Serializer):
    """Serializer for a sweep grid file."""

    config = serializers.DictField(required=False, default=dict)
    methods = serializers.ListField(
        child=serializers.ChoiceField(choices=METHODS), allow_empty=True
    )
    attacks = serializers.ListField(
        child=serializers.ChoiceField(choices=["CE", "CW"]), required=False,
        default=lambda: ["CE", "CW"],
    )
    epsilons = serializers.ListField(
        child=serializers.FloatField(), required=False,
        default=lambda: [0.05, 0.10, 0.15, 0.20],
    )
    seeds = serializers.ListField(
        child=serializers.IntegerField(min_value=0), required=False
    )
    misclassification = MisclassificationSerializer(required=False)
    hyperparam = HyperparamSerializer(required=False)
