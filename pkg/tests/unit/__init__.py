"""
Unit тесты пакетов библиотеки
"""
