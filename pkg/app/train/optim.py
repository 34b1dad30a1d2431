"""
First-order optimizers over ModelParams.

Only the groups `params.trainable()` names are touched, so a frozen group
stays bit-identical across any number of steps.
"""
import numpy as np


class SGD:
    """Plain gradient descent with L2 weight decay."""

    def __init__(self, lr=0.01, weight_decay=0.0):
        self.lr = lr
        self.weight_decay = weight_decay

    def _decayed(self, value, g):
        if self.weight_decay:
            return g + self.weight_decay * value
        return g

    def step(self, params, grads):
        updates = {}
        for name in params.trainable():
            value = getattr(params, name)
            updates[name] = value - self.lr * self._decayed(value, grads[name])
        return params.updated(**updates)


class Adam(SGD):
    """Adam with bias-corrected moment estimates."""

    def __init__(self, lr=0.01, weight_decay=0.0, betas=(0.9, 0.999), eps=1e-8):
        super().__init__(lr, weight_decay)
        self.betas = betas
        self.eps = eps
        self.t = 0
        self.moments = {}

    def step(self, params, grads):
        beta1, beta2 = self.betas
        self.t += 1
        updates = {}
        for name in params.trainable():
            value = getattr(params, name)
            g = self._decayed(value, grads[name])
            m, v = self.moments.get(name, (np.zeros_like(value), np.zeros_like(value)))
            m = beta1 * m + (1 - beta1) * g
            v = beta2 * v + (1 - beta2) * g * g
            self.moments[name] = (m, v)
            m_hat = m / (1 - beta1 ** self.t)
            v_hat = v / (1 - beta2 ** self.t)
            updates[name] = value - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
        return params.updated(**updates)


OPTIMIZERS = {"adam": Adam, "sgd": SGD}


def build_optimizer(cfg):
    try:
        cls = OPTIMIZERS[cfg.optimizer]
    except KeyError:
        raise ValueError(f"Unknown optimizer {cfg.optimizer!r}.") from None
    return cls(lr=cfg.lr, weight_decay=cfg.weight_decay)
