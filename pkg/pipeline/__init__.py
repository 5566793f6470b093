"""
Сценарии, раннер, отчёты и сравнение манифестов
"""
__version__ = "1.0.0"
