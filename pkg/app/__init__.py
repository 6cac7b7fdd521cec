"""
CH不等式最优测量基数值分析系统
CH-Inequality Optimal Measurement Bases Toolkit

计算纯态双量子比特的CH不等式违背量、阈值探测效率η_crit，
并求解两者之间的最优折中（数值优化 + 解析特征值分析）。

版本: v1.0.0
"""

__version__ = "1.0.0"
__author__ = "CH Bases Toolkit Developers"
__description__ = "CH不等式最优测量基数值分析系统"
