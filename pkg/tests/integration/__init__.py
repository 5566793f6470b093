"""
Интеграционные тесты CLI
"""
