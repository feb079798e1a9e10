# Copyright 2026 The phlat Authors. All Rights Reserved.
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
# ==============================================================================

"""Exceptions raised by phlat.

Two families exist. `InvalidInputError` covers inputs that violate an
operation's preconditions; `LimitError` covers inputs that are valid but
exceed a configured computation limit. The command line maps them to exit
codes 3 and 2 respectively.

"""


class Error(Exception):
  pass


class InvalidInputError(Error):
  pass


class LimitError(Error):
  pass


class ShapeError(InvalidInputError):
  pass


class ParseError(InvalidInputError):
  pass


class SingularMatrixError(InvalidInputError):
  pass


class NotNSError(InvalidInputError):
  pass


class NotTerminalError(InvalidInputError):
  pass


class NoLargeBlockError(InvalidInputError):
  pass


class UnimodularError(InvalidInputError):
  pass


class NotApplicableError(InvalidInputError):
  pass


class BadColumnError(InvalidInputError):
  pass


class BadSubsetError(InvalidInputError):
  pass


class NotSquareFreeError(InvalidInputError):
  pass


class RangeError(InvalidInputError):
  pass


class NotInFError(InvalidInputError):
  pass


class BadXError(InvalidInputError):
  pass


class SizeLimitError(LimitError):
  pass


class BudgetError(LimitError):
  pass


class FactorizationLimitError(LimitError):
  pass
