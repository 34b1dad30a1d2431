"""
Serializers for the canonical dataset files.
"""
from rest_framework import serializers


class MetaSerializer(serializers.Serializer):
    """Serializer for meta.json."""

    name = serializers.CharField(max_length=255)
    num_nodes = serializers.IntegerField(min_value=1)
    num_features = serializers.IntegerField(min_value=1)
    num_classes = serializers.IntegerField(min_value=1)
    num_edges = serializers.IntegerField(min_value=0, required=False)
    num_raw_edges = serializers.IntegerField(min_value=0, required=False)


class SplitsSerializer(serializers.Serializer):
    """Serializer for splits.json."""

    train = serializers.ListField(child=serializers.IntegerField(min_value=0))
    val = serializers.ListField(child=serializers.IntegerField(min_value=0))
    test = serializers.ListField(child=serializers.IntegerField(min_value=0))

    def validate(self, attrs):
        """Check the three index sets are pairwise disjoint."""
        seen = {}
        for split in ("train", "val", "test"):
            for node in attrs[split]:
                if node in seen:
                    raise serializers.ValidationError(
                        f"node {node} appears in both {seen[node]} and {split}",
                        code="overlap",
                    )
                seen[node] = split
        return attrs
