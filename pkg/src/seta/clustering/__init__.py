from .kmeans import METHODS, ClusterPartition, cluster_losses, partition_from_labels, sse
from .oracle import oracle_best_partition

__all__ = [
    "METHODS",
    "ClusterPartition",
    "cluster_losses",
    "oracle_best_partition",
    "partition_from_labels",
    "sse",
]
