import math

import numpy as np
import pytest

from zeropair.errors import DomainError
from zeropair.scale import CorrelationWindow, ScaleContext, log_scale, m_density, m_inverse, m_main


def test_log_scale():
    assert log_scale(1e5) == pytest.approx(math.log(1e5) / (2 * math.pi))
    assert ScaleContext(1e4).L == pytest.approx(log_scale(1e4))


def test_window():
    w = CorrelationWindow(ScaleContext(1e4), 1.0, 0.5, 2.0)
    assert w.U == pytest.approx(1.0 / log_scale(1e4))
    with pytest.raises(DomainError):
        CorrelationWindow(ScaleContext(1e4), 3.0, 0.5, 2.0)


def test_m_inverse_roundtrip():
    x = np.array([-0.99, -0.5, 0.0, 1.0, 29.0, 1e3, 1e5])
    t = m_inverse(x)
    assert np.allclose(m_main(t), x, rtol=1e-12, atol=1e-10)
    with pytest.raises(DomainError):
        m_inverse(-1.5)


def test_m_density_is_derivative():
    t, h = 1234.5, 1e-4
    fd = (m_main(t + h) - m_main(t - h)) / (2 * h)
    assert m_density(t) == pytest.approx(fd, rel=1e-8)
