# Copyright 2022 Akamai Technologies, Inc
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

from __future__ import annotations

import functools
import itertools
import math
import string
from typing import Sequence

import numpy as np
from scipy.special import binom

from .._typing import FloatArray

# Letters reserved for the coefficient axes in contractions.
_COEF_LETTERS = "XYZ"


class TaylorAlgebra:
    """
    Truncated multivariate Taylor polynomials.

    A field is a numpy array whose last axis holds the coefficients of
    a polynomial in ``dim`` variables, truncated at total ``degree``.
    Leading axes are tensor indices; arithmetic broadcasts over them.
    Monomials are ordered by total degree, so coefficient 0 is the value.

    Nesting the algebra in its own variables gives forward-mode
    algorithmic differentiation of any order: see :meth:`derivatives`.
    """

    def __init__(self, dim: int, degree: int) -> None:
        self.dim = dim
        self.degree = degree
        exponents: list[tuple[int, ...]] = []
        for total in range(degree + 1):
            for combo in itertools.combinations_with_replacement(range(dim), total):
                exponents.append(tuple(combo.count(i) for i in range(dim)))
        #: Exponent of every monomial.
        self.exponents = exponents
        #: Position of every exponent.
        self.index = {e: k for k, e in enumerate(exponents)}
        #: Number of coefficients.
        self.size = len(exponents)
        self.degrees = np.array([sum(e) for e in exponents])
        self.factorials = np.array(
            [math.prod(math.factorial(b) for b in e) for e in exponents], dtype=float
        )
        product = np.zeros((self.size, self.size, self.size))
        for a, ea in enumerate(exponents):
            for b, eb in enumerate(exponents):
                ec = tuple(x + y for x, y in zip(ea, eb))
                c = self.index.get(ec)
                if c is not None:
                    product[a, b, c] = 1.0
        self._product = product
        self._shifts = [self._shift(i) for i in range(dim)]

    @classmethod
    @functools.lru_cache(maxsize=None)
    def get(cls, dim: int, degree: int) -> TaylorAlgebra:
        """
        Shared instance for the given dimension and degree.
        """
        return cls(dim, degree)

    def __repr__(self) -> str:
        return f"<{type(self).__name__}: dim={self.dim}, degree={self.degree}>"

    def _shift(self, i: int) -> tuple[FloatArray, FloatArray, FloatArray]:
        targets, sources, factors = [], [], []
        for k, e in enumerate(self.exponents):
            if sum(e) == self.degree:
                continue
            raised = list(e)
            raised[i] += 1
            targets.append(k)
            sources.append(self.index[tuple(raised)])
            factors.append(raised[i])
        return np.array(targets), np.array(sources), np.array(factors, dtype=float)

    # Construction

    def constant(self, value: float | FloatArray) -> FloatArray:
        """
        Constant field with the given value (scalar or tensor).
        """
        value = np.asarray(value, dtype=float)
        field = np.zeros(value.shape + (self.size,))
        field[..., 0] = value
        return field

    def variable(self, i: int, value: float = 0.0) -> FloatArray:
        """
        The coordinate field ``value + X_i``; constant at degree zero.
        """
        field = self.constant(value)
        if self.degree > 0:
            field[self.index[tuple(int(j == i) for j in range(self.dim))]] = 1.0
        return field

    def point(self, x: Sequence[float] | FloatArray) -> list[FloatArray]:
        """
        Coordinate fields around the point ``x``.
        """
        return [self.variable(i, float(x[i])) for i in range(self.dim)]

    def from_coefficients(
        self, coefficients: dict[tuple[int, ...], FloatArray]
    ) -> FloatArray:
        """
        Field from a mapping of exponents to (tensor) coefficients.
        """
        first = next(iter(coefficients.values()))
        field = np.zeros(np.shape(first) + (self.size,))
        for exponent, value in coefficients.items():
            field[..., self.index[exponent]] = value
        return field

    # Arithmetic

    def mul(self, a: FloatArray, b: FloatArray) -> FloatArray:
        """
        Product of two fields (broadcasting over tensor axes).
        """
        return np.einsum("...X,...Y,XYZ->...Z", a, b, self._product)

    def einsum(self, subscripts: str, *operands: FloatArray) -> FloatArray:
        """
        Tensor contraction of fields.

        ``subscripts`` names tensor axes only, e.g. ``"ij,jk->ik"``;
        coefficient axes are multiplied as polynomials.
        Letters ``X``, ``Y`` and ``Z`` are reserved.
        """
        inputs, output = subscripts.replace(" ", "").split("->")
        names = inputs.split(",")
        if len(names) != len(operands):
            raise ValueError(f"Expected {len(names)} operands, got {len(operands)}")
        if any(c in _COEF_LETTERS for c in subscripts):
            raise ValueError(f"Letters {_COEF_LETTERS} are reserved: {subscripts!r}")
        acc_name, acc = names[0], operands[0]
        for k in range(1, len(operands)):
            later = set(output).union(*names[k + 1 :])
            keep = "".join(
                dict.fromkeys(c for c in acc_name + names[k] if c in later)
            )
            acc = np.einsum(
                f"{acc_name}X,{names[k]}Y,XYZ->{keep}Z", acc, operands[k], self._product
            )
            acc_name = keep
        return np.einsum(f"{acc_name}X->{output}X", acc)

    def power_series(self, f: FloatArray, coefficients: FloatArray) -> FloatArray:
        """
        Compose ``f`` with a function given by its Taylor coefficients
        at the value of ``f``.

        ``coefficients[..., k]`` is the k-th Taylor coefficient
        (broadcasting over tensor axes of ``f``).
        """
        g = np.array(f, dtype=float)
        g[..., 0] = 0.0
        result = self.constant(coefficients[..., self.degree])
        for k in range(self.degree - 1, -1, -1):
            result = self.mul(result, g)
            result[..., 0] += coefficients[..., k]
        return result

    def exp(self, f: FloatArray) -> FloatArray:
        k = np.arange(self.degree + 1)
        coefficients = np.exp(f[..., 0])[..., None] / _factorials(k)
        return self.power_series(f, coefficients)

    def log(self, f: FloatArray) -> FloatArray:
        f0 = f[..., 0][..., None]
        k = np.arange(1, self.degree + 1)
        tail = (-1.0) ** (k + 1) / (k * f0**k)
        return self.power_series(f, np.concatenate([np.log(f0), tail], axis=-1))

    def power(self, f: FloatArray, exponent: float) -> FloatArray:
        f0 = f[..., 0][..., None]
        k = np.arange(self.degree + 1)
        coefficients = binom(exponent, k) * f0 ** (exponent - k)
        return self.power_series(f, coefficients)

    def sqrt(self, f: FloatArray) -> FloatArray:
        return self.power(f, 0.5)

    def reciprocal(self, f: FloatArray) -> FloatArray:
        f0 = f[..., 0][..., None]
        k = np.arange(self.degree + 1)
        return self.power_series(f, (-1.0) ** k / f0 ** (k + 1))

    def inverse(self, matrix: FloatArray) -> FloatArray:
        """
        Inverse of a matrix field (axes ``(n, n, size)``).
        """
        base = np.linalg.inv(matrix[..., 0])
        a = self.constant(base)
        e = np.array(matrix)
        e[..., 0] = 0.0
        step = -self.einsum("ij,jk->ik", a, e)
        term = a
        result = a
        for _ in range(self.degree):
            term = self.einsum("ij,jk->ik", step, term)
            result = result + term
        return result

    # Differentiation

    def diff(self, f: FloatArray, i: int) -> FloatArray:
        """
        Partial derivative along variable ``i``.

        The result is exact up to degree ``degree - 1``;
        its top-degree coefficients are zero.
        """
        targets, sources, factors = self._shifts[i]
        result = np.zeros_like(f)
        result[..., targets] = f[..., sources] * factors
        return result

    def gradient(self, f: FloatArray) -> FloatArray:
        """
        Gradient field, with the derivative index appended as a new
        leading axis (``(dim, ..., size)``).
        """
        return np.stack([self.diff(f, i) for i in range(self.dim)])

    def value(self, f: FloatArray) -> FloatArray:
        return np.asarray(f[..., 0])

    def derivatives(self, f: FloatArray) -> list[FloatArray]:
        """
        All partial derivatives of a scalar field at the expansion point,
        as full symmetric tensors of orders ``0..degree``.
        """
        tensors = []
        for order in range(self.degree + 1):
            tensor = np.zeros((self.dim,) * order)
            for index in itertools.product(range(self.dim), repeat=order):
                exponent = tuple(index.count(i) for i in range(self.dim))
                k = self.index[exponent]
                tensor[index] = f[k] * self.factorials[k]
            tensors.append(tensor)
        return tensors

    def from_derivatives(self, tensors: Sequence[FloatArray], order: int) -> FloatArray:
        """
        Field of the order-``order`` derivative tensor of a function,
        given its derivative tensors at the expansion point.

        Requires ``order + degree < len(tensors)``.
        The coefficient of :math:`X^\\beta` at index :math:`I` is
        :math:`D^{|I|+|\\beta|}f[I,\\beta] / \\beta!`.
        """
        if order + self.degree >= len(tensors):
            raise ValueError(
                f"Order {order} field of degree {self.degree} needs derivatives "
                f"up to order {order + self.degree}, got {len(tensors) - 1}"
            )
        field = np.zeros((self.dim,) * order + (self.size,))
        for k, exponent in enumerate(self.exponents):
            extra = tuple(i for i in range(self.dim) for _ in range(exponent[i]))
            tensor = tensors[order + len(extra)]
            field[..., k] = tensor[(Ellipsis,) + extra] / self.factorials[k]
        return field


def _factorials(k: FloatArray) -> FloatArray:
    return np.array([math.factorial(int(j)) for j in k], dtype=float)


def index_letters(count: int, *, skip: str = "") -> str:
    """
    ``count`` distinct lowercase letters, avoiding those in ``skip``.
    """
    letters = [c for c in string.ascii_lowercase if c not in skip]
    return "".join(letters[:count])
