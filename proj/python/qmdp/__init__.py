# Copyright 2026 The qmdp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact solver for qualitative MDPs and POMDPs."""

from ._core import Error, Model, Series, agree, embed, load, oom, parse, solve, solve_belief

__all__ = ["Error", "Model", "Series", "agree", "embed", "load", "oom", "parse", "solve", "solve_belief"]
