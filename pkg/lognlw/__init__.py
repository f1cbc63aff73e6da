"""lognlw - 径向对数超临界非线性波动方程 □u = u⁵log(2+u²) 的模拟与估计验证。"""

__version__ = "0.1.0"
