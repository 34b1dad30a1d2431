"""
Serializers for params.json.
"""
from rest_framework import serializers


class MatrixField(serializers.ListField):
    """Row-major nested list of floats."""

    child = serializers.ListField(child=serializers.FloatField())


class ParamsSerializer(serializers.Serializer):
    """Serializer for a saved ModelParams."""

    d = serializers.IntegerField(min_value=1)
    h = serializers.IntegerField(min_value=1)
    C = serializers.IntegerField(min_value=1)
    seed = serializers.IntegerField()
    freeze_encoder = serializers.BooleanField()
    freeze_head = serializers.BooleanField()
    W1 = MatrixField()
    W2 = MatrixField()
    w = MatrixField()
    b = serializers.ListField(child=serializers.FloatField())

    def validate(self, attrs):
        """Check every array matches the declared dimensions."""
        d, h, C = attrs["d"], attrs["h"], attrs["C"]
        expected = {"W1": (d, h), "W2": (h, h), "w": (h, C)}
        for name, (rows, cols) in expected.items():
            matrix = attrs[name]
            if len(matrix) != rows or any(len(row) != cols for row in matrix):
                raise serializers.ValidationError(
                    {name: f"expected shape ({rows}, {cols})"}
                )
        if len(attrs["b"]) != C:
            raise serializers.ValidationError({"b": f"expected length {C}"})
        return attrs
