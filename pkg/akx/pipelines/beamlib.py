# python3
# Copyright 2019 Google LLC
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Beam utilities."""
from typing import Dict, Iterable, Tuple

import apache_beam as beam
from akx.attack import csp

# trials, successes, verified successes, mean nodes, aggregated node variance
Accumulator = Tuple[int, int, int, float, float]


class AttackStatisticsCombineFn(beam.CombineFn):
  """Aggregates attack reports computed on different workers.

  Counts add up; the mean and variance of nodes_explored are merged with
  Welford's algorithm, so the result does not depend on how trials were
  split across workers.
  """

  def create_accumulator(self) -> Accumulator:
    return 0, 0, 0, 0.0, 0.0

  def add_input(
      self,
      accumulator: Accumulator,
      report: csp.AttackReport,
  ) -> Accumulator:
    """Includes one report in the running statistics.

    `added_variance` follows the online algorithm described at
    https://en.wikipedia.org/wiki/Algorithms_for_calculating_variance and
    corresponds to M2 there.

    Args:
      accumulator: running counts, mean and aggregated variance.
      report: attack outcome to include.

    Returns:
      Updated accumulator.
    """
    count, found, verified, mean, added_variance = accumulator
    value = float(report.nodes_explored)
    count += 1
    new_mean = mean + (value - mean) / count
    added_variance += (value - mean) * (value - new_mean)
    found += report.found is not None
    verified += report.equivalent_to_secret
    return count, found, verified, new_mean, added_variance

  def merge_accumulators(
      self, accumulators: Iterable[Accumulator]) -> Accumulator:
    """Merges accumulators from independent workers."""
    accumulators = [a for a in accumulators if a[0]]
    if not accumulators:
      return self.create_accumulator()
    counts, founds, verifieds, means, added_variances = zip(*accumulators)
    total = sum(counts)
    new_mean = sum(c * m for c, m in zip(counts, means)) / total
    new_added_variance = sum(
        v + c * (m - new_mean)**2
        for c, m, v in zip(counts, means, added_variances))
    return total, sum(founds), sum(verifieds), new_mean, new_added_variance

  def extract_output(self, accumulator: Accumulator) -> Dict[str, float]:
    """Extracts counts, success rate and node statistics."""
    count, found, verified, mean, added_variance = accumulator
    return dict(
        trials=count,
        found=found,
        verified=verified,
        success_rate=found / count if count else 0.0,
        mean_nodes=mean,
        variance_nodes=added_variance / (count - 1) if count > 1 else 0.0,
    )
