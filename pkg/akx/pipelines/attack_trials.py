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
"""Run a beam pipeline attacking many random handshakes."""
import json
import os

from absl import app
from absl import flags
import apache_beam as beam
import numpy as np
from akx.attack import csp
from akx.core import amalgam
from akx.protocol import handshake
from akx.pipelines import beamlib

from apache_beam import runners

# files
flags.DEFINE_string(
    'output_path', None,
    'Path to the folder where to save the summary.')
flags.DEFINE_string(
    'output_name', 'attack_trials',
    'Name of the summary file without extension.')

# platform parameters
flags.DEFINE_integer(
    'trial_generators', 2,
    'Number of amalgamated generator pairs n.')
flags.DEFINE_integer(
    'trial_strands', 4,
    'Number of braid strands m.')
flags.DEFINE_integer(
    'trial_index_cap', 3,
    'Thompson input index cap p.')
flags.DEFINE_integer(
    'trial_word_length', 4,
    'Length of each random defining word.')
flags.DEFINE_integer(
    'trial_private_length', 3,
    'Length L of the private token words.')

# attack parameters
flags.DEFINE_enum(
    'trial_method', csp.Method.BRUTE_FORCE.value, sorted(csp.METHODS),
    'Attack to run against each recorded M1.')
flags.DEFINE_integer(
    'trial_max_len', 3,
    'Longest conjugator tried by the brute force attack.')
flags.DEFINE_integer(
    'trial_budget', 10000,
    'Maximum number of candidates scored per attack.')
flags.DEFINE_integer(
    'num_trials', 10,
    'Number of random handshakes to attack.')
flags.DEFINE_integer(
    'multiplicity_trials', 100,
    'Conjugator multiplicity checks per seed.')
flags.DEFINE_integer(
    'trial_seed_offset', 1000000,
    'Integer seed offset for the random number generators.')

FLAGS = flags.FLAGS


def flags_as_dict():
  module = FLAGS.find_module_defining_flag('output_path')
  flags_list = FLAGS.flags_by_module_dict()[module]
  return {flag.name: flag.value for flag in flags_list}


def attack_one(
    seed: int,
    n: int,
    m: int,
    p: int,
    word_length: int,
    private_length: int,
    method: str,
    max_len: int,
    budget: int,
):
  """Generates parameters, runs a handshake and attacks its M1.

  Returns:
    csp.AttackReport for the recorded M1.
  """
  rng = np.random.RandomState(seed)
  params = amalgam.random_params(n, m, p, word_length, private_length, rng)
  _, _, transcript = handshake.run_handshake(params, rng, params, rng)
  return csp.run_attack(method, params, transcript.m1, max_len, budget)


def save_summary(statistics, path, multiplicity, multiplicity_trials,
                 flags=None):
  """Writes attack statistics and multiplicity counts as JSON."""
  summary = dict(
      attack=statistics,
      multiplicity=dict(verified=multiplicity, trials=multiplicity_trials),
      flags=flags or {},
  )
  with open(path, 'w') as f:
    json.dump(summary, f, indent=2, sort_keys=True)


def main(_, runner=None):
  if runner is None:
    # must create before flags are used
    runner = runners.DirectRunner()

  output_path = FLAGS.output_path
  os.makedirs(output_path, exist_ok=True)
  summary_path = os.path.join(output_path, FLAGS.output_name + '.json')

  seeds = [i + FLAGS.trial_seed_offset for i in range(FLAGS.num_trials)]
  trial_kwargs = dict(
      n=FLAGS.trial_generators,
      m=FLAGS.trial_strands,
      p=FLAGS.trial_index_cap,
      word_length=FLAGS.trial_word_length,
      private_length=FLAGS.trial_private_length,
      method=FLAGS.trial_method,
      max_len=FLAGS.trial_max_len,
      budget=FLAGS.trial_budget,
  )
  multiplicity_trials = FLAGS.multiplicity_trials
  n = FLAGS.trial_generators
  flags_dict = flags_as_dict()

  def multiplicity(seed):
    return csp.conjugator_multiplicity_demo(
        n, multiplicity_trials, np.random.RandomState(seed))

  def build_pipeline(root):
    """Builds a pipeline that attacks trials and saves a summary."""

    # Reshuffle keeps Beam from fusing all attacks into one task.
    seeds_pipeline = (
        root
        | beam.Create(seeds)
        | 'split_trials' >> beam.Reshuffle()
    )

    multiplicity_count = (
        seeds_pipeline
        | 'multiplicity' >> beam.Map(multiplicity)
        | 'sum_multiplicity' >> beam.CombineGlobally(sum)
    )

    summary_pipeline = (  # pylint: disable=unused-variable
        seeds_pipeline
        | 'attack' >> beam.Map(attack_one, **trial_kwargs)
        | 'attack_statistics' >> beam.CombineGlobally(
            beamlib.AttackStatisticsCombineFn())
        | 'save_summary' >> beam.Map(
            save_summary,
            summary_path,
            multiplicity=beam.pvalue.AsSingleton(multiplicity_count),
            multiplicity_trials=multiplicity_trials * len(seeds),
            flags=flags_dict,
        )
    )

  runner.run(build_pipeline)


if __name__ == '__main__':
  flags.mark_flag_as_required('output_path')
  app.run(main)
