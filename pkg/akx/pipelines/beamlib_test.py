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
"""Tests for beamlib."""
import apache_beam as beam
from apache_beam.testing import test_pipeline
from apache_beam.testing import util
import numpy as np
from akx.attack import csp
from akx.core import words
from akx.pipelines import beamlib
from absl.testing import absltest


def report(nodes, found=True):
  return csp.AttackReport(
      method=csp.Method.BRUTE_FORCE,
      found=words.parse_word('W1') if found else None,
      equivalent_to_secret=found,
      nodes_explored=nodes,
      wall_time=0.0,
      budget=None)


class AttackStatisticsCombineFnTest(absltest.TestCase):

  def setUp(self):
    super().setUp()
    self.combine_fn = beamlib.AttackStatisticsCombineFn()
    self.nodes = [3, 10, 4, 7, 1]
    self.reports = [report(n, found=n % 2 == 1) for n in self.nodes]

  def add_all(self, reports):
    accumulator = self.combine_fn.create_accumulator()
    for r in reports:
      accumulator = self.combine_fn.add_input(accumulator, r)
    return accumulator

  def test_single_worker(self):
    output = self.combine_fn.extract_output(self.add_all(self.reports))
    self.assertEqual(output['trials'], 5)
    self.assertEqual(output['found'], 3)
    self.assertEqual(output['verified'], 3)
    self.assertAlmostEqual(output['success_rate'], 0.6)
    self.assertAlmostEqual(output['mean_nodes'], np.mean(self.nodes))
    self.assertAlmostEqual(output['variance_nodes'],
                           np.var(self.nodes, ddof=1))

  def test_merge_matches_single_worker(self):
    merged = self.combine_fn.merge_accumulators([
        self.add_all(self.reports[:2]),
        self.combine_fn.create_accumulator(),
        self.add_all(self.reports[2:]),
    ])
    expected = self.add_all(self.reports)
    np.testing.assert_allclose(merged, expected)

  def test_empty(self):
    output = self.combine_fn.extract_output(
        self.combine_fn.merge_accumulators([]))
    self.assertEqual(output['trials'], 0)
    self.assertEqual(output['success_rate'], 0.0)
    self.assertEqual(output['variance_nodes'], 0.0)

  def test_in_pipeline(self):
    with test_pipeline.TestPipeline() as p:
      output = (
          p
          | beam.Create(self.reports)
          | beam.CombineGlobally(self.combine_fn)
          | beam.Map(lambda stats: (stats['trials'], stats['found'])))
      util.assert_that(output, util.equal_to([(5, 3)]))


if __name__ == '__main__':
  absltest.main()
